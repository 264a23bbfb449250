//! Finite-difference eigensolvers used as numerical ground truth.
//!
//! * [`solve_radial`]: `-d²/dr² + V(r)` on an interval with Dirichlet walls,
//!   as a symmetric tridiagonal problem.
//! * [`solve_wedge`]: `-∂ρ² - ρ⁻²∂φ² + Ω(ρ, φ)` on (a window of) the wedge
//!   `0 < φ < π/3`, via shift-invert Lanczos on the 5-point operator.
//! * [`solve_separable`]: the angular/radial split available when every
//!   force exponent lies in `{2, 4, -2}`.
//!
//! Every grid stores interior nodes only; the walls sit one spacing outside
//! the first and last node, so refining `n → 2n + 1` halves the spacing and
//! keeps the walls fixed. The `*_refined` variants exploit that to form a
//! Richardson extrapolation and a convergence diagnostic.

pub mod lanczos;
mod radial;
mod separable;
pub mod sparse;
pub mod tridiagonal;
mod wedge;

pub use radial::{solve_radial, solve_radial_refined, Grid1D, DEFAULT_RADIAL_POINTS};
pub use separable::{
    angular_eigenvalues, detect_separability, separable_radial_grid, solve_separable,
    SeparableDecomposition, ANGULAR_GRID_POINTS,
};
pub use wedge::{
    assemble_wedge_operator, solve_wedge, solve_wedge_refined, WedgeGrid, WedgeOperator,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative residual `‖Ax - λx‖ / max(1, |λ|)` every returned pair meets.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Most eigenpairs the wedge solver will iterate for.
pub const MAX_WEDGE_LEVELS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GridInfo {
    Radial {
        r_min: f64,
        r_max: f64,
        n: usize,
        h: f64,
    },
    Wedge {
        rho_min: f64,
        rho_max: f64,
        n_rho: usize,
        phi_min: f64,
        phi_max: f64,
        n_phi: usize,
        h_rho: f64,
        h_phi: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Ascending.
    pub values: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub grid: GridInfo,
    pub method: String,
    pub iterations: usize,
}

/// Coarse and fine solves on grids with spacing ratio 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedResult {
    pub coarse: EigenResult,
    pub fine: EigenResult,
    /// `(4 E_fine - E_coarse) / 3`, removing the `h²` error term.
    pub extrapolated: Vec<f64>,
    /// `|E_fine - E_coarse| / |E_fine|` per level.
    pub disagreement: Vec<f64>,
}

impl RefinedResult {
    pub fn max_disagreement(&self) -> f64 {
        self.disagreement.iter().cloned().fold(0.0, f64::max)
    }
}

pub(crate) fn richardson(
    coarse: EigenResult,
    fine: EigenResult,
    tolerance: Option<f64>,
) -> Result<RefinedResult> {
    let extrapolated = coarse
        .values
        .iter()
        .zip(&fine.values)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    let disagreement: Vec<f64> = coarse
        .values
        .iter()
        .zip(&fine.values)
        .map(|(c, f)| (f - c).abs() / f.abs().max(f64::MIN_POSITIVE))
        .collect();
    let refined = RefinedResult {
        coarse,
        fine,
        extrapolated,
        disagreement,
    };
    if let Some(tol) = tolerance {
        let worst = refined.max_disagreement();
        if worst > 10.0 * tol {
            return Err(Error::GridTooCoarse {
                disagreement: worst,
                allowed: 10.0 * tol,
            });
        }
    }
    Ok(refined)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinearSolver {
    /// Direct banded Cholesky factorization of `A - σI`.
    BandedCholesky,
    /// Factorization-free Jacobi-preconditioned conjugate gradients.
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub solver: LinearSolver,
    pub tolerance: f64,
    pub max_lanczos_steps: usize,
    pub seed: u64,
    pub cg_tolerance: f64,
    pub cg_max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            solver: LinearSolver::BandedCholesky,
            tolerance: DEFAULT_TOLERANCE,
            max_lanczos_steps: 300,
            seed: 0x5EED,
            cg_tolerance: 1e-12,
            cg_max_iterations: 20_000,
        }
    }
}
