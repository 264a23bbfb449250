//! Three equal-mass particles on a line bound by power-law two-body forces
//! with a strong short-range repulsion.
//!
//! The crate reduces the problem to polar Jacobi coordinates, produces exact
//! trigonometric closed forms for every power-law term, analyses the
//! resulting two-dimensional potential landscape, builds the separable
//! harmonic approximation around its absolute minimum and validates the
//! resulting low-lying spectra with finite-difference eigensolvers.

// Domain checks are written as `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coordinates;
pub mod eigensolver;
pub mod error;
pub mod format;
pub mod landscape;
pub mod osculation;
pub mod polynomial;
pub mod trigform;

pub use error::{Error, Result};
