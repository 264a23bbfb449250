use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lanczos::{
    shift_invert_lanczos, CholeskyInverse, ConjugateGradientInverse, LanczosSettings,
};
use super::sparse::CsrMatrix;
use super::{
    richardson, EigenOptions, EigenResult, GridInfo, LinearSolver, RefinedResult,
    MAX_WEDGE_LEVELS,
};
use crate::coordinates::PolarConfig;
use crate::error::{Error, Result};
use crate::landscape::{self, Confinement};
use crate::osculation::{harmonic_approximation, HarmonicApproximation};
use crate::trigform::PotentialSpec;

/// Interior nodes of the rectangle `(rho_min, rho_max) × (phi_min, phi_max)`
/// inside the wedge, with Dirichlet walls on all four edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeGrid {
    pub rho_min: f64,
    pub rho_max: f64,
    pub n_rho: usize,
    pub phi_min: f64,
    pub phi_max: f64,
    pub n_phi: usize,
}

const MIN_NODES: usize = 4;
pub(crate) const DEFAULT_N_RHO: usize = 400;
pub(crate) const DEFAULT_N_PHI: usize = 200;

impl WedgeGrid {
    /// The full angular range `(0, π/3)`.
    pub fn new(rho_min: f64, rho_max: f64, n_rho: usize, n_phi: usize) -> Result<Self> {
        Self::with_window(rho_min, rho_max, n_rho, 0.0, FRAC_PI_3, n_phi)
    }

    /// A sub-rectangle of the wedge; the walls at `phi_min`, `phi_max` stand in
    /// for the impenetrable edges when the states are localized far from them.
    pub fn with_window(
        rho_min: f64,
        rho_max: f64,
        n_rho: usize,
        phi_min: f64,
        phi_max: f64,
        n_phi: usize,
    ) -> Result<Self> {
        if !(rho_min > 0.0 && rho_max.is_finite() && rho_min < rho_max) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < rho_min < rho_max, got ({rho_min}, {rho_max})"
            )));
        }
        if !(0.0 <= phi_min && phi_min < phi_max && phi_max <= FRAC_PI_3) {
            return Err(Error::InvalidGrid(format!(
                "angular window ({phi_min}, {phi_max}) is not inside (0, π/3)"
            )));
        }
        if n_rho < MIN_NODES || n_phi < MIN_NODES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_NODES} nodes per direction, got {n_rho}×{n_phi}"
            )));
        }
        Ok(Self {
            rho_min,
            rho_max,
            n_rho,
            phi_min,
            phi_max,
            n_phi,
        })
    }

    pub fn h_rho(&self) -> f64 {
        (self.rho_max - self.rho_min) / (self.n_rho + 1) as f64
    }

    pub fn h_phi(&self) -> f64 {
        (self.phi_max - self.phi_min) / (self.n_phi + 1) as f64
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.rho_min + (i + 1) as f64 * self.h_rho()
    }

    pub fn phi(&self, j: usize) -> f64 {
        self.phi_min + (j + 1) as f64 * self.h_phi()
    }

    pub fn len(&self) -> usize {
        self.n_rho * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same walls, half the spacing in both directions.
    pub fn refined(&self) -> Self {
        Self {
            n_rho: 2 * self.n_rho + 1,
            n_phi: 2 * self.n_phi + 1,
            ..*self
        }
    }

    pub fn info(&self) -> GridInfo {
        GridInfo::Wedge {
            rho_min: self.rho_min,
            rho_max: self.rho_max,
            n_rho: self.n_rho,
            phi_min: self.phi_min,
            phi_max: self.phi_max,
            n_phi: self.n_phi,
            h_rho: self.h_rho(),
            h_phi: self.h_phi(),
        }
    }

    /// Full wedge, 400×200 nodes, `ρ` from `10⁻³ R` out past the outer
    /// turning region of the `k` lowest harmonic levels.
    pub fn default_for(spec: &PotentialSpec, k: usize) -> Result<Self> {
        let (rho_min, rho_max) = match harmonic_approximation(spec) {
            Ok(h) => {
                let (l_rho, _) = h.lengths();
                (1e-3 * h.r, h.r + 2.0 * window_lengths(k) * l_rho)
            }
            Err(_) => (1e-3, radial_extent_without_minimum(spec, k)?),
        };
        Self::new(rho_min, rho_max, DEFAULT_N_RHO, DEFAULT_N_PHI)
    }

    /// A rectangle centred on the harmonic minimum, `7 + 2√k` oscillator
    /// lengths wide on each side in `ρ` and in `η = R(φ - π/6)`, clipped to
    /// the wedge.
    pub fn around_minimum(
        h: &HarmonicApproximation,
        k: usize,
        n_rho: usize,
        n_phi: usize,
    ) -> Result<Self> {
        let (l_rho, l_eta) = h.lengths();
        let w = window_lengths(k);
        let rho_min = (h.r - w * l_rho).max(1e-3 * h.r);
        let rho_max = h.r + w * l_rho;
        let half = (w * l_eta / h.r).min(FRAC_PI_6);
        Self::with_window(rho_min, rho_max, n_rho, h.phi0 - half, h.phi0 + half, n_phi)
    }
}

fn window_lengths(k: usize) -> f64 {
    7.0 + 2.0 * (k.max(1) as f64).sqrt()
}

/// Outer radius for confining potentials without a harmonic minimum: the
/// first doubling of `ρ` at which the symmetry-line value clears a margin
/// well above the low-lying levels.
fn radial_extent_without_minimum(spec: &PotentialSpec, k: usize) -> Result<f64> {
    let compiled = spec.compile()?;
    let base = compiled.eval_rt(1.0, 1.0).abs();
    let margin = 200.0 * (k.max(1) as f64) + 10.0 * base;
    let mut rho: f64 = 1.0;
    for _ in 0..60 {
        if compiled.eval_rt(rho, 1.0) > margin {
            return Ok(rho);
        }
        rho *= 2.0;
    }
    Err(Error::InvalidSpec(format!("cannot bound the radial extent of {spec}")))
}

/// The assembled operator with node ordering metadata.
#[derive(Debug, Clone)]
pub struct WedgeOperator {
    pub grid: WedgeGrid,
    pub matrix: CsrMatrix,
    /// Smallest potential value over the nodes.
    pub potential_min: f64,
    /// `true` when `φ` is the slow index (node `j * n_rho + i`).
    pub phi_major: bool,
}

impl WedgeOperator {
    pub fn index(&self, i: usize, j: usize) -> usize {
        if self.phi_major {
            j * self.grid.n_rho + i
        } else {
            i * self.grid.n_phi + j
        }
    }
}

/// Off-diagonal entries `(column, value)` of one operator row plus its diagonal.
type AssembledRow = (Vec<(usize, f64)>, f64);

/// Five-point discretization of `-∂ρ² - ρ⁻²∂φ² + Ω`. The faster-varying
/// index is the shorter direction, which keeps the bandwidth minimal.
pub fn assemble_wedge_operator(spec: &PotentialSpec, grid: &WedgeGrid) -> Result<WedgeOperator> {
    let compiled = spec.compile()?;
    let (n_rho, n_phi) = (grid.n_rho, grid.n_phi);
    let phi_major = n_rho < n_phi;
    let c_rho = 1.0 / (grid.h_rho() * grid.h_rho());
    let h_phi2 = grid.h_phi() * grid.h_phi();
    let index = |i: usize, j: usize| {
        if phi_major {
            j * n_rho + i
        } else {
            i * n_phi + j
        }
    };
    let node = |idx: usize| {
        if phi_major {
            (idx % n_rho, idx / n_rho)
        } else {
            (idx / n_phi, idx % n_phi)
        }
    };
    let rows: Vec<Result<AssembledRow>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = node(idx);
            let rho = grid.rho(i);
            let c_phi = 1.0 / (rho * rho * h_phi2);
            let v = compiled.eval_unchecked(PolarConfig {
                rho,
                phi: grid.phi(j),
            });
            if !v.is_finite() {
                return Err(Error::Domain(format!(
                    "potential is not finite at node (ρ={rho}, φ={})",
                    grid.phi(j)
                )));
            }
            let mut row = Vec::with_capacity(5);
            if i > 0 {
                row.push((index(i - 1, j), -c_rho));
            }
            if j > 0 {
                row.push((index(i, j - 1), -c_phi));
            }
            if j + 1 < n_phi {
                row.push((index(i, j + 1), -c_phi));
            }
            if i + 1 < n_rho {
                row.push((index(i + 1, j), -c_rho));
            }
            row.push((idx, 2.0 * c_rho + 2.0 * c_phi + v));
            row.sort_by_key(|&(c, _)| c);
            Ok((row, v))
        })
        .collect();
    let mut matrix_rows = Vec::with_capacity(rows.len());
    let mut potential_min = f64::INFINITY;
    for row in rows {
        let (row, v) = row?;
        potential_min = potential_min.min(v);
        matrix_rows.push(row);
    }
    Ok(WedgeOperator {
        grid: *grid,
        matrix: CsrMatrix::from_rows(matrix_rows),
        potential_min,
        phi_major,
    })
}

/// Lowest `k ≤ 8` levels on `grid` by shift-invert Lanczos with the shift
/// one unit below the smallest nodal potential value.
pub fn solve_wedge(
    spec: &PotentialSpec,
    grid: &WedgeGrid,
    k: usize,
    options: &EigenOptions,
) -> Result<EigenResult> {
    if k == 0 || k > MAX_WEDGE_LEVELS {
        return Err(Error::InvalidSpec(format!(
            "wedge solver computes 1..={MAX_WEDGE_LEVELS} levels, requested {k}"
        )));
    }
    if landscape::classify(spec) != Confinement::Confining {
        return Err(Error::InvalidSpec(format!("potential {spec} is not confining")));
    }
    let op = assemble_wedge_operator(spec, grid)?;
    let sigma = op.potential_min - 1.0;
    let settings = LanczosSettings {
        tolerance: options.tolerance,
        max_steps: options.max_lanczos_steps,
        seed: options.seed,
    };
    let (outcome, label) = match options.solver {
        LinearSolver::BandedCholesky => {
            let inverse = CholeskyInverse::new(&op.matrix, sigma)?;
            (
                shift_invert_lanczos(&op.matrix, &inverse, k, settings)?,
                "shift-invert-lanczos/banded-cholesky",
            )
        }
        LinearSolver::ConjugateGradient => {
            let inverse = ConjugateGradientInverse::new(
                &op.matrix,
                sigma,
                options.cg_tolerance,
                options.cg_max_iterations,
            );
            (
                shift_invert_lanczos(&op.matrix, &inverse, k, settings)?,
                "shift-invert-lanczos/conjugate-gradient",
            )
        }
    };
    Ok(EigenResult {
        values: outcome.values,
        residual_norms: outcome.residuals,
        grid: grid.info(),
        method: label.into(),
        iterations: outcome.iterations,
    })
}

/// [`solve_wedge`] on `grid` and on `grid.refined()`, with Richardson
/// extrapolation; `tolerance` bounds the relative coarse/fine disagreement
/// (times ten).
pub fn solve_wedge_refined(
    spec: &PotentialSpec,
    grid: &WedgeGrid,
    k: usize,
    options: &EigenOptions,
    tolerance: Option<f64>,
) -> Result<RefinedResult> {
    let (coarse, fine) = rayon::join(
        || solve_wedge(spec, grid, k, options),
        || solve_wedge(spec, &grid.refined(), k, options),
    );
    richardson(coarse?, fine?, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osculation::{approximate_spectrum, harmonic_approximation};

    /// `√3 (2l + 3 + 4n)` with `l(l+1) = 9(κ + j)²`: the exact levels of the
    /// Calogero wedge operator at `ω = 1`.
    fn calogero_exact(nu: f64, j: u32, n: u32) -> f64 {
        let kappa = 0.5 * (1.0 + (1.0 + 2.0 * nu * (nu + 1.0)).sqrt());
        let lambda = 9.0 * (kappa + j as f64).powi(2);
        let l = 0.5 * (-1.0 + (1.0 + 4.0 * lambda).sqrt());
        3f64.sqrt() * (2.0 * l + 3.0 + 4.0 * n as f64)
    }

    #[test]
    fn operator_is_bitwise_symmetric() {
        let spec = PotentialSpec::calogero(1.0, 3.0).unwrap();
        for grid in [
            WedgeGrid::new(0.05, 6.0, 30, 17).unwrap(),
            WedgeGrid::new(0.05, 6.0, 12, 25).unwrap(),
        ] {
            let op = assemble_wedge_operator(&spec, &grid).unwrap();
            assert!(op.matrix.is_symmetric_bitwise());
            assert_eq!(op.matrix.bandwidth(), grid.n_rho.min(grid.n_phi));
        }
    }

    #[test]
    fn calogero_matches_exact_levels() {
        let nu = 10.0;
        let spec = PotentialSpec::calogero(1.0, nu).unwrap();
        let h = harmonic_approximation(&spec).unwrap();
        let grid = WedgeGrid::around_minimum(&h, 3, 60, 60).unwrap();
        let refined = solve_wedge_refined(&spec, &grid, 3, &EigenOptions::default(), None).unwrap();
        let mut exact = vec![
            calogero_exact(nu, 0, 0),
            calogero_exact(nu, 1, 0),
            calogero_exact(nu, 0, 1),
            calogero_exact(nu, 2, 0),
        ];
        exact.sort_by(f64::total_cmp);
        for (e, x) in refined.extrapolated.iter().zip(&exact) {
            assert!((e - x).abs() < 1e-3 * x, "{e} vs {x}");
        }
        let op = assemble_wedge_operator(&spec, &grid).unwrap();
        assert!(refined.coarse.values[0] > op.potential_min);
    }

    #[test]
    fn calogero_against_harmonic_at_nu_100() {
        let spec = PotentialSpec::calogero(1.0, 100.0).unwrap();
        let h = harmonic_approximation(&spec).unwrap();
        let grid = WedgeGrid::around_minimum(&h, 1, 60, 60).unwrap();
        let numeric = solve_wedge(&spec, &grid, 1, &EigenOptions::default()).unwrap();
        let approx = approximate_spectrum(&h, 1, 1, "").entries[0].energy;
        assert!((numeric.values[0] - approx).abs() < 0.01 * approx);
        assert!(numeric.residual_norms[0] < 1e-8);
    }

    #[test]
    fn spiked_cubic_against_harmonic() {
        let spec = PotentialSpec::spiked_cubic_at_radius(1.0, 8.0).unwrap();
        let h = harmonic_approximation(&spec).unwrap();
        let grid = WedgeGrid::around_minimum(&h, 2, 60, 60).unwrap();
        let numeric = solve_wedge(&spec, &grid, 2, &EigenOptions::default()).unwrap();
        let approx = h.energy(0, 0);
        assert!((numeric.values[0] - approx).abs() < 0.02 * approx);
    }

    #[test]
    fn full_wedge_default_grid_and_refinement() {
        let spec = PotentialSpec::calogero(1.0, 2.0).unwrap();
        let coarse_grid = WedgeGrid::new(2e-3, 7.0, 80, 40).unwrap();
        let options = EigenOptions::default();
        let refined = solve_wedge_refined(&spec, &coarse_grid, 2, &options, None).unwrap();
        let change = (refined.fine.values[0] - refined.coarse.values[0]).abs();
        assert!(change < 1e-2 * refined.fine.values[0], "{change}");
        let exact = calogero_exact(2.0, 0, 0);
        assert!((refined.extrapolated[0] - exact).abs() < 2e-3 * exact);
        let default = WedgeGrid::default_for(&spec, 2).unwrap();
        assert_eq!((default.n_rho, default.n_phi), (400, 200));
        assert_eq!((default.phi_min, default.phi_max), (0.0, FRAC_PI_3));
    }

    #[test]
    fn growing_the_domain_never_raises_levels() {
        let spec = PotentialSpec::calogero(1.0, 1.0).unwrap();
        let h_rho = 0.1;
        let options = EigenOptions::default();
        let mut previous = vec![f64::INFINITY; 3];
        // nested grids: same spacing and inner wall, more nodes outward
        for n in [30, 40, 55] {
            let rho_max = 0.1 + h_rho * (n + 1) as f64;
            let grid = WedgeGrid::new(0.1, rho_max, n, 24).unwrap();
            let values = solve_wedge(&spec, &grid, 3, &options).unwrap().values;
            for (v, p) in values.iter().zip(&previous) {
                assert!(*v <= *p + 1e-9 * v.abs(), "{v} > {p}");
            }
            previous = values;
        }
    }

    #[test]
    fn conjugate_gradient_mode_agrees_with_cholesky() {
        let spec = PotentialSpec::calogero(1.0, 3.0).unwrap();
        let grid = WedgeGrid::new(0.01, 6.0, 40, 20).unwrap();
        let direct = solve_wedge(&spec, &grid, 2, &EigenOptions::default()).unwrap();
        let cg_options = EigenOptions {
            solver: LinearSolver::ConjugateGradient,
            ..EigenOptions::default()
        };
        let iterative = solve_wedge(&spec, &grid, 2, &cg_options).unwrap();
        for (a, b) in direct.values.iter().zip(&iterative.values) {
            assert!((a - b).abs() < 1e-7 * a.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let spec = PotentialSpec::calogero(1.0, 3.0).unwrap();
        let grid = WedgeGrid::new(0.01, 6.0, 10, 10).unwrap();
        let options = EigenOptions::default();
        assert!(solve_wedge(&spec, &grid, 0, &options).is_err());
        assert!(solve_wedge(&spec, &grid, 9, &options).is_err());
        let open = PotentialSpec::new([(2, -1.0), (-2, 1.0)]).unwrap();
        assert!(solve_wedge(&open, &grid, 1, &options).is_err());
        assert!(WedgeGrid::with_window(0.1, 1.0, 10, 0.2, 1.2, 10).is_err());
        assert!(WedgeGrid::new(0.0, 1.0, 10, 10).is_err());
    }
}
