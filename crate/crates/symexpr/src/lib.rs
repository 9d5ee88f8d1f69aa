//! Exact scalar arithmetic for the dynamical r-matrix toolkit.
//!
//! A [`Scalar`] is a rational function of the dynamical coordinates
//! λ¹..λˡ with Gaussian-rational coefficients, always stored in canonical
//! form: numerator and denominator coprime, denominator monic in
//! graded-lex order. Zero tests are therefore syntactic.

pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use matrix::{matrix_rank_inverse, ScalarMatrix};
pub use parse::{parse_expr, parse_scalar, Expr, ExprRing, ParseError, VarKind};
pub use poly::{Mono, Poly};
pub use rational::{GaussRat, Q};
pub use scalar::Scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("variable index {index} out of range (1..={num_vars})")]
    IndexOutOfRange { index: usize, num_vars: usize },
}

/// Partial derivative with respect to λ^i, with `i` one-based.
pub fn diff_scalar(s: &Scalar, i: usize, num_vars: usize) -> Result<Scalar, ScalarError> {
    if i == 0 || i > num_vars {
        return Err(ScalarError::IndexOutOfRange { index: i, num_vars });
    }
    Ok(s.diff(i - 1))
}
