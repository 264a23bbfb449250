//! Critical points of `Ω(ρ, φ)` on the wedge `0 < φ < π/3`.
//!
//! Every closed form depends on `φ` only through `t = sin 3φ`, so the
//! landscape is mirror-symmetric about the line `φ = π/6`, which is always
//! stationary in `φ`.

use crate::coordinates::PolarConfig;
use crate::error::{Error, Result};
use crate::trigform::{CompiledPotential, PotentialSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, SQRT_2};

/// Number of uniform φ intervals across the wedge used to seed minima.
pub const ANGULAR_SCAN_SAMPLES: usize = 2048;
/// Minima closer than this to π/6 are merged into the central one.
pub const MERGE_TOLERANCE: f64 = 1e-6;
const ROOT_MAX_ITER: usize = 200;
const BRACKET_LO: f64 = 1e-6;
const BRACKET_HI: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub rho: f64,
    pub phi: f64,
    pub value: f64,
    pub kind: CriticalKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularMinima {
    pub rho: f64,
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeReport {
    pub absolute_minimum: CriticalPoint,
    pub critical_radius: Option<f64>,
    pub angular_minima_sample: Vec<AngularMinima>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confinement {
    Confining,
    NonConfining,
}

/// Confinement at large `ρ`.
///
/// An even leading power with a positive coupling confines everywhere. An
/// odd leading power is non-negative in the wedge but vanishes on its edges,
/// so it confines only together with a positive even power or with a
/// repulsive spike (and no attractive even power to undo it).
pub fn classify(spec: &PotentialSpec) -> Confinement {
    let live = || spec.terms.iter().filter(|t| t.coupling != 0.0);
    let Some(lead) = live().filter(|t| t.m > 0).max_by_key(|t| t.m) else {
        return Confinement::NonConfining;
    };
    if lead.coupling <= 0.0 {
        return Confinement::NonConfining;
    }
    if lead.m % 2 == 0 {
        return Confinement::Confining;
    }
    let top_even = live().filter(|t| t.m > 0 && t.m % 2 == 0).max_by_key(|t| t.m);
    if top_even.is_some_and(|t| t.coupling > 0.0) {
        return Confinement::Confining;
    }
    let any_attractive_even = live().any(|t| t.m > 0 && t.m % 2 == 0 && t.coupling < 0.0);
    if has_repulsive_spike(spec) && !any_attractive_even {
        Confinement::Confining
    } else {
        Confinement::NonConfining
    }
}

/// The most singular term diverges to `+∞` at the wedge edges.
pub fn has_repulsive_spike(spec: &PotentialSpec) -> bool {
    spec.terms
        .iter()
        .filter(|t| t.m < 0 && t.coupling != 0.0)
        .min_by_key(|t| t.m)
        .is_some_and(|t| {
            let sign = if t.m % 2 == 0 { 1.0 } else { -1.0 };
            t.coupling * sign > 0.0
        })
}

/// Absolute minimum `(R, Ω(R, π/6))` along the symmetry line.
///
/// Newton iteration on `Ω_ρ` with a bisection safeguard inside a bracket
/// grown geometrically from `ρ = 1`.
pub fn symmetry_line_minimum(spec: &PotentialSpec) -> Result<(f64, f64)> {
    if classify(spec) != Confinement::Confining {
        return Err(Error::NoMinimum(format!("potential {spec} is not confining")));
    }
    let pot = spec.compile()?;
    let grad = |rho: f64| pot.partials_on_symmetry_line(rho).d_rho;
    let r = minimize_radial(grad, |rho| pot.partials_on_symmetry_line(rho).d_rho_rho)?;
    Ok((r, pot.partials_on_symmetry_line(r).value))
}

/// Root of `grad` with a `-` to `+` sign change, i.e. a minimum of the
/// underlying function, searched on `(1e-6, 1e9)`.
pub(crate) fn minimize_radial(grad: impl Fn(f64) -> f64, curv: impl Fn(f64) -> f64) -> Result<f64> {
    let g1 = grad(1.0);
    if g1 == 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = if g1 < 0.0 {
        let mut hi = 1.0;
        while grad(hi) < 0.0 {
            hi *= 2.0;
            if hi > BRACKET_HI {
                return Err(Error::NoMinimum("radial derivative never turns positive".into()));
            }
        }
        (hi / 2.0, hi)
    } else {
        let mut lo = 1.0;
        while grad(lo) > 0.0 {
            lo /= 2.0;
            if lo < BRACKET_LO {
                return Err(Error::NoMinimum("radial derivative never turns negative".into()));
            }
        }
        (lo, lo * 2.0)
    };
    let mut x = 0.5 * (lo + hi);
    for _ in 0..ROOT_MAX_ITER {
        let g = grad(x);
        let k = curv(x);
        if g.abs() < 1e-12 * (1.0 + k.abs() * x) {
            return Ok(x);
        }
        if g < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(x);
        }
        let newton = x - g / k;
        x = if k > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(x)
}

fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn angular_minima_compiled(pot: &CompiledPotential, rho: f64) -> Vec<f64> {
    let n = ANGULAR_SCAN_SAMPLES;
    let half = n / 2;
    let step = FRAC_PI_3 / n as f64;
    let d_phi = |phi: f64| pot.partials_unchecked(PolarConfig::new(rho, phi)).d_phi;
    let grads: Vec<f64> = (1..half).map(|i| d_phi(i as f64 * step)).collect();
    let mut left = Vec::new();
    for i in 0..grads.len().saturating_sub(1) {
        if grads[i] < 0.0 && grads[i + 1] >= 0.0 {
            let a = (i + 1) as f64 * step;
            left.push(bisect_root(d_phi, a, a + step, 1e-13));
        }
    }
    let centre = pot.partials_on_symmetry_line(rho);
    let last_phi = (half - 1) as f64 * step;
    let last_grad = *grads.last().unwrap_or(&0.0);
    let centre_is_min = if centre.d_phi_phi != 0.0 {
        centre.d_phi_phi > 0.0
    } else {
        centre.value <= pot.eval_unchecked(PolarConfig::new(rho, last_phi))
    };
    if !centre_is_min && last_grad < 0.0 {
        // the pair can sit closer to π/6 than one scan interval
        let mut delta = 0.5 * (FRAC_PI_6 - last_phi);
        while delta > 1e-15 && d_phi(FRAC_PI_6 - delta) <= 0.0 {
            delta *= 0.5;
        }
        if delta > 1e-15 {
            left.push(bisect_root(d_phi, last_phi, FRAC_PI_6 - delta, 1e-13));
        }
    }
    let mut merged_into_centre = centre_is_min;
    left.retain(|&phi| {
        if FRAC_PI_6 - phi < MERGE_TOLERANCE {
            merged_into_centre = true;
            false
        } else {
            true
        }
    });
    let mut out: Vec<f64> = left.clone();
    if merged_into_centre {
        out.push(FRAC_PI_6);
    }
    out.extend(left.iter().rev().map(|&phi| FRAC_PI_3 - phi));
    out
}

/// Interior minima of `φ ↦ Ω(ρ, φ)` on `(0, π/3)`, ascending, found from a
/// uniform scan of `Ω_φ` sign changes refined by bisection. Off-axis minima
/// come in mirror pairs `φ` and `π/3 - φ`.
pub fn angular_minima(spec: &PotentialSpec, rho: f64) -> Result<Vec<f64>> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    Ok(angular_minima_compiled(&spec.compile()?, rho))
}

/// `(a2, b2)` when `spec` is exactly the two-term spiked cubic well
/// `a2 ρ³ sin3φ + b2/(ρ² sin²3φ)` with positive couplings.
pub fn spiked_cubic_couplings(spec: &PotentialSpec) -> Option<(f64, f64)> {
    if spec.terms.len() != 2 {
        return None;
    }
    let f3 = spec.coupling(3)?;
    let fm2 = spec.coupling(-2)?;
    (f3 > 0.0 && fm2 > 0.0).then_some((f3 * 1.5 * SQRT_2, fm2 * 4.5))
}

/// Radius where the two off-axis angular minima merge at `φ = π/6`.
///
/// Closed form `(2 b2/a2)^{1/5}` for the two-term spiked cubic well,
/// [`critical_radius_numeric`] otherwise.
pub fn critical_radius(spec: &PotentialSpec) -> Result<f64> {
    match spiked_cubic_couplings(spec) {
        Some((a2, b2)) => Ok((2.0 * b2 / a2).powf(0.2)),
        None => critical_radius_numeric(spec),
    }
}

/// Bisection (in `ln ρ`) on the boundary between the one-minimum and the
/// two-minima regimes of [`angular_minima`].
pub fn critical_radius_numeric(spec: &PotentialSpec) -> Result<f64> {
    let pot = spec.compile()?;
    let scale = symmetry_line_minimum(spec).map(|(r, _)| r).unwrap_or(1.0);
    let probes = 241;
    let (lo_exp, hi_exp) = (-3.0_f64, 3.0_f64);
    let rhos: Vec<f64> = (0..probes)
        .map(|i| scale * 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (probes - 1) as f64))
        .collect();
    let counts: Vec<usize> = rhos
        .par_iter()
        .map(|&rho| angular_minima_compiled(&pot, rho).len())
        .collect();
    let idx = counts
        .windows(2)
        .position(|w| (w[0] == 1) != (w[1] == 1))
        .ok_or_else(|| {
            Error::NotApplicable("number of angular minima never changes on the probed range".into())
        })?;
    let single_low = counts[idx] == 1;
    let (mut lo, mut hi) = (rhos[idx].ln(), rhos[idx + 1].ln());
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let single = angular_minima_compiled(&pot, mid.exp()).len() == 1;
        if single == single_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Harmonic force constants `(Ω_ρρ/2, Ω_φφ/(2R²))` at a minimum.
pub fn hessian_at_minimum(spec: &PotentialSpec, r: f64, phi0: f64) -> Result<(f64, f64)> {
    let pot = spec.compile()?;
    let p = if phi0 == FRAC_PI_6 {
        pot.partials_on_symmetry_line(r)
    } else {
        pot.partials(PolarConfig::new(r, phi0))?
    };
    let k_rho = 0.5 * p.d_rho_rho;
    let k_eta = 0.5 * p.d_phi_phi / (r * r);
    if k_rho > 0.0 && k_eta > 0.0 {
        Ok((k_rho, k_eta))
    } else {
        Err(Error::NotAMinimum { k_rho, k_eta })
    }
}

/// Lower bound `(3ρ/2)(2 a2² b2 ρ)^{1/3}` of the spiked cubic well over all
/// angles, valid for `ρ ≥ ρ0 = (2 b2/a2)^{1/5}`. It is attained at the two
/// off-axis minima, where `sin³3φ = 2 b2/(a2 ρ⁵)`.
pub fn confinement_bound(a2: f64, b2: f64, rho: f64) -> Result<f64> {
    if !(a2 > 0.0 && b2 > 0.0) {
        return Err(Error::Domain(format!("couplings must be positive, got a2={a2}, b2={b2}")));
    }
    let rho0 = (2.0 * b2 / a2).powf(0.2);
    if !(rho >= rho0 * (1.0 - 1e-12)) {
        return Err(Error::Domain(format!("rho={rho} below the critical radius {rho0}")));
    }
    Ok(1.5 * rho * (2.0 * a2 * a2 * b2 * rho).cbrt())
}

/// Minimum, critical radius and angular minima at the requested radii
/// (defaults derived from `R` and `ρ0` when `rhos` is empty).
pub fn landscape_report(spec: &PotentialSpec, rhos: &[f64]) -> Result<LandscapeReport> {
    let (r, value) = symmetry_line_minimum(spec)?;
    let pot = spec.compile()?;
    let centre = pot.partials_on_symmetry_line(r);
    let kind = match (centre.d_rho_rho > 0.0, centre.d_phi_phi > 0.0) {
        (true, true) => CriticalKind::Minimum,
        (false, false) => CriticalKind::Maximum,
        _ => CriticalKind::Saddle,
    };
    let critical = match critical_radius(spec) {
        Ok(rho0) => Some(rho0),
        Err(Error::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    let sample: Vec<f64> = if rhos.is_empty() {
        let mut v = vec![0.5 * r, r, 2.0 * r, 4.0 * r];
        if let Some(rho0) = critical {
            v.extend([0.9 * rho0, 1.1 * rho0, 2.0 * rho0]);
        }
        v.sort_by(f64::total_cmp);
        v
    } else {
        rhos.to_vec()
    };
    let angular_minima_sample = sample
        .iter()
        .map(|&rho| AngularMinima {
            rho,
            phi: angular_minima_compiled(&pot, rho),
        })
        .collect();
    Ok(LandscapeReport {
        absolute_minimum: CriticalPoint {
            rho: r,
            phi: FRAC_PI_6,
            value,
            kind,
        },
        critical_radius: critical,
        angular_minima_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn classification() {
        let sc = PotentialSpec::cubic_anharmonic(0.0, 0.5, 3.0).unwrap();
        assert_eq!(classify(&sc), Confinement::Confining);
        assert_eq!(classify(&PotentialSpec::new([(3, -1.0)]).unwrap()), Confinement::NonConfining);
        assert_eq!(classify(&PotentialSpec::new([(2, 1.0)]).unwrap()), Confinement::Confining);
        // odd leading power with nothing guarding the wedge edges
        assert_eq!(classify(&PotentialSpec::new([(3, 1.0)]).unwrap()), Confinement::NonConfining);
        assert_eq!(
            classify(&PotentialSpec::new([(3, 1.0), (2, 1.0)]).unwrap()),
            Confinement::Confining
        );
        assert_eq!(classify(&PotentialSpec::new([(-2, 1.0)]).unwrap()), Confinement::NonConfining);
    }

    #[test]
    fn spike_orientation() {
        assert!(has_repulsive_spike(&PotentialSpec::new([(2, 1.0), (-2, 1.0)]).unwrap()));
        // Ω^(-1) is negative in the wedge, so a positive coupling attracts
        assert!(!has_repulsive_spike(&PotentialSpec::new([(2, 1.0), (-1, 1.0)]).unwrap()));
        assert!(has_repulsive_spike(&PotentialSpec::new([(2, 1.0), (-3, -1.0)]).unwrap()));
    }

    #[test]
    fn unit_spiked_cubic_minimum() {
        let spec = PotentialSpec::spiked_cubic(1.0, 1.5).unwrap();
        let (r, v) = symmetry_line_minimum(&spec).unwrap();
        assert!(rel(r, 1.0) < 1e-12, "{r}");
        assert!(rel(v, 2.5) < 1e-12);
    }

    #[test]
    fn calogero_minimum() {
        for (omega, nu) in [(1.0, 10.0), (0.5, 3.0), (2.0, 100.0)] {
            let spec = PotentialSpec::calogero(omega, nu).unwrap();
            let (r, v) = symmetry_line_minimum(&spec).unwrap();
            let expected = (3.0 * nu * (nu + 1.0) / (2.0 * omega * omega)).powf(0.25);
            assert!(rel(r, expected) < 1e-12);
            assert!(rel(v, 6.0 * omega * omega * r * r) < 1e-12);
        }
    }

    #[test]
    fn spiked_cubic_general_minimum() {
        for (a2, b2) in [(1.0, 7.0), (0.3, 50.0), (4.0, 0.2)] {
            let spec = PotentialSpec::spiked_cubic(a2, b2).unwrap();
            let (r, v) = symmetry_line_minimum(&spec).unwrap();
            let expected = (2.0 * b2 / (3.0 * a2)).powf(0.2);
            assert!(rel(r, expected) < 1e-12);
            assert!(rel(v, 2.5 * a2 * r.powi(3)) < 1e-12);
        }
    }

    #[test]
    fn no_minimum_without_confinement() {
        let spec = PotentialSpec::new([(3, -1.0), (-2, 1.0)]).unwrap();
        assert!(matches!(symmetry_line_minimum(&spec), Err(Error::NoMinimum(_))));
        // confining but no repulsion: Ω_ρ > 0 all the way down
        let spec = PotentialSpec::new([(2, 1.0)]).unwrap();
        assert!(matches!(symmetry_line_minimum(&spec), Err(Error::NoMinimum(_))));
    }

    #[test]
    fn angular_minima_regimes() {
        let spec = PotentialSpec::spiked_cubic(1.0, 1.0).unwrap();
        let rho0 = 2f64.powf(0.2);
        assert!(rel(critical_radius(&spec).unwrap(), rho0) < 1e-14);
        let inside = angular_minima(&spec, 0.8 * rho0).unwrap();
        assert_eq!(inside, vec![FRAC_PI_6]);
        let outside = angular_minima(&spec, 1.5 * rho0).unwrap();
        assert_eq!(outside.len(), 2);
        assert!((outside[0] - (FRAC_PI_3 - outside[1])).abs() < 1e-12);
        let calogero = PotentialSpec::calogero(1.0, 2.0).unwrap();
        for rho in [0.1, 1.0, 30.0] {
            assert_eq!(angular_minima(&calogero, rho).unwrap(), vec![FRAC_PI_6]);
        }
        assert!(angular_minima(&calogero, 0.0).is_err());
    }

    #[test]
    fn calogero_has_no_critical_radius() {
        let spec = PotentialSpec::calogero(1.0, 5.0).unwrap();
        assert!(matches!(critical_radius(&spec), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn hessian_examples() {
        let omega = 1.5;
        let spec = PotentialSpec::calogero(omega, 20.0).unwrap();
        let (r, _) = symmetry_line_minimum(&spec).unwrap();
        let (kr, ke) = hessian_at_minimum(&spec, r, FRAC_PI_6).unwrap();
        assert!(rel(kr, 12.0 * omega * omega) < 1e-10);
        assert!(rel(ke, 27.0 * omega * omega) < 1e-10);

        let a2 = 2.0;
        let spec = PotentialSpec::spiked_cubic_at_radius(a2, 5.0).unwrap();
        let (r, _) = symmetry_line_minimum(&spec).unwrap();
        let (kr, ke) = hessian_at_minimum(&spec, r, FRAC_PI_6).unwrap();
        assert!(rel(kr, 7.5 * a2 * r) < 1e-10);
        assert!(rel(ke, 9.0 * a2 * r) < 1e-10);

        // the central line is a maximum in φ beyond ρ0
        let spec = PotentialSpec::spiked_cubic(1.0, 1.0).unwrap();
        assert!(matches!(
            hessian_at_minimum(&spec, 3.0, FRAC_PI_6),
            Err(Error::NotAMinimum { .. })
        ));
    }

    #[test]
    fn confinement_bound_examples() {
        let rho0 = 2f64.powf(0.2);
        let b = confinement_bound(1.0, 1.0, rho0).unwrap();
        let spec = PotentialSpec::spiked_cubic(1.0, 1.0).unwrap();
        let centre = crate::trigform::eval(&spec, PolarConfig::new(rho0, FRAC_PI_6)).unwrap();
        assert!(rel(b, centre) < 1e-9);
        let ratio = confinement_bound(1.0, 1.0, 2.0 * rho0).unwrap() / b;
        assert!(rel(ratio, 2f64.powf(4.0 / 3.0)) < 1e-14);
        assert!(confinement_bound(1.0, 1.0, 0.5 * rho0).is_err());
        assert!(confinement_bound(-1.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn report_for_spiked_cubic() {
        let spec = PotentialSpec::spiked_cubic_at_radius(1.0, 3.0).unwrap();
        let report = landscape_report(&spec, &[]).unwrap();
        assert_eq!(report.absolute_minimum.kind, CriticalKind::Minimum);
        assert!(rel(report.absolute_minimum.rho, 3.0) < 1e-12);
        let rho0 = report.critical_radius.unwrap();
        for s in &report.angular_minima_sample {
            let expected = if s.rho < rho0 { 1 } else { 2 };
            assert_eq!(s.phi.len(), expected, "rho={}", s.rho);
        }
    }
}
