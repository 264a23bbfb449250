use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent m = 0 has no power-law form")]
    ZeroExponent,

    #[error("singular configuration: pair difference {difference:e} below {threshold:e} for exponent {m}")]
    SingularConfiguration { m: i32, difference: f64, threshold: f64 },

    #[error("invalid potential: {0}")]
    InvalidSpec(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no minimum: {0}")]
    NoMinimum(String),

    #[error("not a minimum: curvatures ({k_rho}, {k_eta}) must both be positive")]
    NotAMinimum { k_rho: f64, k_eta: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-convex well: second Taylor coefficient {0} is not positive")]
    NonConvex(f64),

    #[error("grid too coarse: successive grids disagree by {disagreement:e} (allowed {allowed:e})")]
    GridTooCoarse { disagreement: f64, allowed: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
