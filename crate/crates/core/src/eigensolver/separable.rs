//! The exactly separable family: forces with exponents in `{2, 4, -2}`.
//!
//! Those are the only exponents whose wedge form is either independent of
//! `φ` (`m = 2, 4`) or exactly `1/(ρ² sin²3φ)` (`m = -2`), so
//! `Ω = f(ρ) + g(φ)/ρ²` with `f = 3F₂ρ² + (9/2)F₄ρ⁴` and
//! `g = (9/2)F₋₂ / sin²3φ`.

use std::f64::consts::FRAC_PI_3;

use serde::{Deserialize, Serialize};

use super::radial::{dirichlet_values, solve_radial, Grid1D};
use crate::error::{Error, Result};
use crate::osculation::{RadialPotential, SpectrumEntry, SpectrumMethod, SpectrumTable};
use crate::trigform::PotentialSpec;

/// Interior nodes of the angular grid on `(0, π/3)`.
pub const ANGULAR_GRID_POINTS: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableDecomposition {
    /// `f(ρ)` as `(power, coefficient)` pairs; empty when no `m = 2, 4` term.
    pub radial_terms: Vec<(i32, f64)>,
    /// `s` in `g(φ) = s / sin²3φ`.
    pub angular_strength: f64,
}

pub fn detect_separability(spec: &PotentialSpec) -> Option<SeparableDecomposition> {
    let mut radial_terms = Vec::new();
    let mut angular_strength = 0.0;
    for term in &spec.terms {
        match term.m {
            2 => radial_terms.push((2, 3.0 * term.coupling)),
            4 => radial_terms.push((4, 4.5 * term.coupling)),
            -2 => angular_strength = 4.5 * term.coupling,
            _ => return None,
        }
    }
    radial_terms.retain(|&(_, c)| c != 0.0);
    radial_terms.sort_by_key(|&(p, _)| p);
    Some(SeparableDecomposition {
        radial_terms,
        angular_strength,
    })
}

/// Lowest `k` eigenvalues `Λ` of `-u'' + s u / sin²3φ` on `(0, π/3)` with
/// Dirichlet ends, Richardson-extrapolated from `n` and `2n + 1` nodes.
pub fn angular_eigenvalues(strength: f64, k: usize, n: usize) -> Result<Vec<f64>> {
    if k == 0 || 4 * k >= n {
        return Err(Error::InvalidGrid(format!(
            "requested {k} angular levels on {n} points; need 0 < k < N/4"
        )));
    }
    if strength < 0.0 {
        return Err(Error::InvalidSpec(format!(
            "attractive angular strength {strength} makes the wedge problem unbounded"
        )));
    }
    let g = move |phi: f64| strength / (3.0 * phi).sin().powi(2);
    let (coarse, fine) = rayon::join(
        || dirichlet_values(0.0, FRAC_PI_3, n, &g, k),
        || dirichlet_values(0.0, FRAC_PI_3, 2 * n + 1, &g, k),
    );
    let (coarse, fine) = (coarse?.0, fine?.0);
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect())
}

/// A radial grid adapted to the highest requested level, i.e. to the
/// largest angular eigenvalue.
pub fn separable_radial_grid(
    spec: &PotentialSpec,
    k_angular: usize,
    k_radial: usize,
) -> Result<Grid1D> {
    let split = detect_separability(spec)
        .ok_or_else(|| Error::NotApplicable(format!("potential {spec} is not separable")))?;
    let lambdas = angular_eigenvalues(split.angular_strength, k_angular, ANGULAR_GRID_POINTS)?;
    let top = *lambdas.last().expect("k_angular > 0");
    let v = radial_for(&split, top)?;
    Grid1D::default_for(&v, k_radial)
}

fn radial_for(split: &SeparableDecomposition, lambda: f64) -> Result<RadialPotential> {
    RadialPotential::new(split.radial_terms.iter().copied().chain([(-2, lambda)]))
}

/// Table of `E` for angular index `n < k_angular` and radial index
/// `m < k_radial`, all radial problems solved on `g`.
pub fn solve_separable(
    spec: &PotentialSpec,
    k_angular: usize,
    k_radial: usize,
    g: &Grid1D,
) -> Result<SpectrumTable> {
    let split = detect_separability(spec)
        .ok_or_else(|| Error::NotApplicable(format!("potential {spec} is not separable")))?;
    let lambdas = angular_eigenvalues(split.angular_strength, k_angular, ANGULAR_GRID_POINTS)?;
    let mut entries = Vec::with_capacity(k_angular * k_radial);
    for (n, &lambda) in lambdas.iter().enumerate() {
        let v = radial_for(&split, lambda)?;
        let radial = solve_radial(&v, g, k_radial)?;
        for (m, energy) in radial.values.into_iter().enumerate() {
            entries.push(SpectrumEntry {
                m: m as u32,
                n: n as u32,
                energy,
            });
        }
    }
    Ok(SpectrumTable {
        spec: spec.to_string(),
        method: SpectrumMethod::Separable,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{solve_wedge_refined, EigenOptions, WedgeGrid};
    use crate::osculation::harmonic_approximation;

    #[test]
    fn detects_the_separable_family() {
        let sqao = PotentialSpec::sqao(1.0, 0.1, 10.0).unwrap();
        let split = detect_separability(&sqao).unwrap();
        assert_eq!(split.radial_terms, vec![(2, 3.0), (4, 4.5 * 0.1)]);
        assert_eq!(split.angular_strength, 4.5 * 110.0);

        let sextic = PotentialSpec::new([(6, 1.0), (-2, 1.0)]).unwrap();
        assert!(detect_separability(&sextic).is_none());

        let pure = PotentialSpec::new([(2, 1.0)]).unwrap();
        let split = detect_separability(&pure).unwrap();
        assert_eq!(split.angular_strength, 0.0);
    }

    #[test]
    fn free_angular_box() {
        let lambdas = angular_eigenvalues(0.0, 4, ANGULAR_GRID_POINTS).unwrap();
        for (j, l) in lambdas.iter().enumerate() {
            let exact = 9.0 * ((j + 1) * (j + 1)) as f64;
            assert!((l - exact).abs() < 1e-8 * exact, "{l} vs {exact}");
        }
    }

    #[test]
    fn calogero_exact_angular_levels() {
        // Λ_j = 9 (κ + j)², 2κ = 1 + √(1 + 2ν(ν+1))
        let nu: f64 = 10.0;
        let kappa = 0.5 * (1.0 + (1.0 + 2.0 * nu * (nu + 1.0)).sqrt());
        let lambdas = angular_eigenvalues(4.5 * nu * (nu + 1.0), 3, ANGULAR_GRID_POINTS).unwrap();
        for (j, l) in lambdas.iter().enumerate() {
            let exact = 9.0 * (kappa + j as f64).powi(2);
            assert!((l - exact).abs() < 1e-6 * exact, "{l} vs {exact}");
        }
    }

    #[test]
    fn agrees_with_wedge_solver() {
        for spec in [
            PotentialSpec::calogero(1.0, 100.0).unwrap(),
            PotentialSpec::sqao(1.0, 0.1, 10.0).unwrap(),
        ] {
            let g = separable_radial_grid(&spec, 1, 1).unwrap();
            let separable = solve_separable(&spec, 1, 1, &g).unwrap().entries[0].energy;
            let h = harmonic_approximation(&spec).unwrap();
            let grid = WedgeGrid::around_minimum(&h, 1, 50, 50).unwrap();
            let wedge = solve_wedge_refined(&spec, &grid, 1, &EigenOptions::default(), None)
                .unwrap()
                .extrapolated[0];
            assert!((separable - wedge).abs() < 5e-3 * wedge, "{separable} vs {wedge}");
        }
    }

    #[test]
    fn non_separable_is_rejected() {
        let spec = PotentialSpec::spiked_cubic_at_radius(1.0, 4.0).unwrap();
        let g = Grid1D::new(0.1, 5.0, 100).unwrap();
        assert!(matches!(
            solve_separable(&spec, 1, 1, &g),
            Err(Error::NotApplicable(_))
        ));
    }
}
