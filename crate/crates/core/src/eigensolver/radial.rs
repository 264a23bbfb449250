use super::tridiagonal::SymTridiagonal;
use super::{richardson, EigenResult, GridInfo, RefinedResult, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::osculation::RadialPotential;
use serde::{Deserialize, Serialize};

pub const DEFAULT_RADIAL_POINTS: usize = 4000;
const DEFAULT_R_MIN: f64 = 1e-4;
const MIN_POINTS: usize = 16;

/// `n` interior nodes `r_min + i h`, `i = 1..=n`, between Dirichlet walls at
/// `r_min` and `r_max`; `h = (r_max - r_min) / (n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite() && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "need finite 0 < r_min, got r_min={r_min}, r_max={r_max}"
            )));
        }
        if r_min >= r_max {
            return Err(Error::InvalidGrid(format!("r_min={r_min} must be below r_max={r_max}")));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!("need at least {MIN_POINTS} points, got {n}")));
        }
        Ok(Self { r_min, r_max, n })
    }

    pub fn h(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n + 1) as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_min + (i + 1) as f64 * self.h()
    }

    /// Same walls, half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n + 1,
            ..*self
        }
    }

    fn info(&self) -> GridInfo {
        GridInfo::Radial {
            r_min: self.r_min,
            r_max: self.r_max,
            n: self.n,
            h: self.h(),
        }
    }

    /// [`DEFAULT_RADIAL_POINTS`] nodes on `(1e-4, 1.5 r_turn)`, where
    /// `r_turn` is the outer classical turning point of level `k - 1`,
    /// located with a coarse provisional solve.
    pub fn default_for(v: &RadialPotential, k: usize) -> Result<Self> {
        if !v.is_confining() {
            return Err(Error::InvalidSpec(format!(
                "radial potential {:?} does not confine",
                v.terms
            )));
        }
        let k = k.max(1);
        let mut r_max = 4.0;
        let mut previous: Option<f64> = None;
        let mut energy = f64::NAN;
        for _ in 0..80 {
            let grid = Grid1D::new(DEFAULT_R_MIN, r_max, 1000.max(8 * k))?;
            let e = dirichlet_values(DEFAULT_R_MIN, r_max, grid.n, &|r| v.eval(r), k)?
                .0[k - 1];
            let settled = previous.is_some_and(|p| (p - e).abs() <= 1e-3 * e.abs().max(1.0));
            energy = e;
            if settled && v.eval(r_max) > e + e.abs().max(1.0) {
                break;
            }
            previous = Some(e);
            r_max *= 1.5;
        }
        let r_turn = outer_turning_point(v, energy, DEFAULT_R_MIN, r_max);
        let r_decay = tunnelling_extent(v, energy, r_turn);
        Grid1D::new(DEFAULT_R_MIN, (1.5 * r_turn).max(r_decay), DEFAULT_RADIAL_POINTS)
    }
}

/// WKB decay exponent the outer wall must sit beyond; `e^{-2·24}` keeps the
/// energy shift from the truncation below double-precision relevance.
const TUNNELLING_ACTION: f64 = 24.0;

/// Radius at which `∫ √(V - E) dr` from the turning point reaches
/// [`TUNNELLING_ACTION`]. For low-lying levels of soft wells this lies well
/// past `1.5 r_turn`.
fn tunnelling_extent(v: &RadialPotential, energy: f64, r_turn: f64) -> f64 {
    let step = 1e-3 * r_turn.max(1e-3);
    let mut action = 0.0;
    let mut r = r_turn;
    while action < TUNNELLING_ACTION && r < 1e6 * r_turn.max(1.0) {
        let mid = r + 0.5 * step;
        action += (v.eval(mid) - energy).max(0.0).sqrt() * step;
        r += step;
    }
    r
}

fn outer_turning_point(v: &RadialPotential, energy: f64, lo: f64, hi: f64) -> f64 {
    // V - E is positive at `hi`; walk inward to the last point below E,
    // then bisect.
    let samples = 4000;
    let step = (hi - lo) / samples as f64;
    let mut a = lo;
    for i in (0..samples).rev() {
        let r = lo + i as f64 * step;
        if v.eval(r) < energy {
            a = r;
            break;
        }
    }
    let (mut a, mut b) = (a, (a + step).min(hi));
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if v.eval(mid) < energy {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Lowest `k` eigenvalues and relative residuals of `-u'' + V u` on `n`
/// interior nodes between walls at `a` and `b`.
pub(crate) fn dirichlet_values(
    a: f64,
    b: f64,
    n: usize,
    v: &dyn Fn(f64) -> f64,
    k: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = (b - a) / (n + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let x = a + (i + 1) as f64 * h;
        let value = v(x);
        if !value.is_finite() {
            return Err(Error::Domain(format!("potential is not finite at node {x}")));
        }
        diag.push(2.0 * inv_h2 + value);
    }
    let t = SymTridiagonal::new(diag, vec![-inv_h2; n - 1]);
    let values = t.lowest_eigenvalues(k);
    let residuals = values
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let x = t.eigenvector(lambda, i as u64);
            t.residual(lambda, &x) / lambda.abs().max(1.0)
        })
        .collect();
    Ok((values, residuals))
}

/// Lowest `k` levels of `-d²/dr² + V(r)` with Dirichlet walls.
pub fn solve_radial(v: &RadialPotential, g: &Grid1D, k: usize) -> Result<EigenResult> {
    if k == 0 || 4 * k >= g.n {
        return Err(Error::InvalidGrid(format!(
            "requested {k} levels on {} points; need 0 < k < N/4",
            g.n
        )));
    }
    let (values, residual_norms) = dirichlet_values(g.r_min, g.r_max, g.n, &|r| v.eval(r), k)?;
    if let Some(&r) = residual_norms.iter().find(|&&r| r >= DEFAULT_TOLERANCE) {
        return Err(Error::NonConvergence {
            iterations: 3,
            residual: r,
        });
    }
    Ok(EigenResult {
        values,
        residual_norms,
        grid: g.info(),
        method: "sturm-bisection".into(),
        iterations: 1,
    })
}

/// Solves on `g` and on `g.refined()`; with `tolerance` set, fails with
/// [`Error::GridTooCoarse`] when the two disagree by more than ten times it.
pub fn solve_radial_refined(
    v: &RadialPotential,
    g: &Grid1D,
    k: usize,
    tolerance: Option<f64>,
) -> Result<RefinedResult> {
    let (coarse, fine) = rayon::join(
        || solve_radial(v, g, k),
        || solve_radial(v, &g.refined(), k),
    );
    richardson(coarse?, fine?, tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osculation::rho_approx_spectrum;

    #[test]
    fn half_line_oscillator() {
        let v = RadialPotential::new([(2, 1.0)]).unwrap();
        let g = Grid1D::new(1e-4, 12.0, 2000).unwrap();
        let res = solve_radial(&v, &g, 3).unwrap();
        for (e, exact) in res.values.iter().zip([3.0, 7.0, 11.0]) {
            assert!((e - exact).abs() < 1e-3, "{e} vs {exact}");
        }
        assert!(res.residual_norms.iter().all(|r| *r < DEFAULT_TOLERANCE));
    }

    #[test]
    fn spiked_oscillator_ground_state() {
        let v = RadialPotential::spiked_harmonic(1.0, 2.0).unwrap();
        let g = Grid1D::default_for(&v, 1).unwrap();
        let e = solve_radial(&v, &g, 1).unwrap().values[0];
        assert!((e - 7.0).abs() < 1e-3, "{e}");
    }

    #[test]
    fn inverse_cubic_within_harmonic_error_budget() {
        let v = RadialPotential::inverse_cubic(1.0, 1.0).unwrap();
        let g = Grid1D::default_for(&v, 1).unwrap();
        let numeric = solve_radial(&v, &g, 1).unwrap().values[0];
        let approx = rho_approx_spectrum(&v, 1).unwrap().entries[0].energy;
        // R = 1: the correction is of the order of the level spacing itself
        assert!((numeric - approx).abs() < 0.25 * approx, "{numeric} vs {approx}");
    }

    #[test]
    fn refinement_removes_h2_error() {
        let v = RadialPotential::new([(2, 1.0)]).unwrap();
        let g = Grid1D::new(1e-9, 10.0, 200).unwrap();
        let r = solve_radial_refined(&v, &g, 2, None).unwrap();
        let plain = (r.fine.values[0] - 3.0).abs();
        let extrapolated = (r.extrapolated[0] - 3.0).abs();
        assert!(extrapolated < plain / 20.0, "{extrapolated} vs {plain}");
        assert!(matches!(
            solve_radial_refined(&v, &g, 2, Some(1e-9)),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn grid_and_level_validation() {
        assert!(Grid1D::new(0.0, 1.0, 100).is_err());
        assert!(Grid1D::new(1.0, 1.0, 100).is_err());
        assert!(Grid1D::new(0.1, 1.0, 15).is_err());
        let v = RadialPotential::new([(2, 1.0)]).unwrap();
        let g = Grid1D::new(0.1, 5.0, 40).unwrap();
        assert!(solve_radial(&v, &g, 10).is_err());
        assert!(solve_radial(&v, &g, 9).is_ok());
    }
}
