//! Classical discrete orthogonal polynomials on linear, quadratic and
//! q-grids: evaluation, zeros, zero monotonicity in a parameter and
//! interlacing in the support size.

// `!(x <= tol)` is used on purpose so NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dd;
pub mod error;
pub mod families;
pub mod grid;
pub mod interlacing;
pub mod qseries;
pub mod stieltjes;
pub mod weights;
pub mod zeros;

pub use error::{Error, Result};
