//! Dense univariate/bivariate polynomials, linear-fractional substitution
//! and coefficient recovery by interpolation.
//!
//! Everything here is generic over [`Scalar`](crate::scalar::Scalar), so the
//! same code runs on `f64`, complex and exact rational coefficients.

mod bivariate;
mod dense;
mod interp;
mod mobius;

pub use bivariate::{BiPoly, BI_DEGREE};
pub use dense::{DensePoly, MAX_DEGREE};
pub use interp::{interpolate_coeffs, solve_linear, Interpolant};
pub use mobius::{
    eliminated_bivariate, leading_coefficient_n3, mobius_substitute_cleared, MobiusQuadruple,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeExceeded { degree: usize, max: usize },
    #[error("singular transformation: ad - bc = {det:e}")]
    SingularTransformation { det: f64 },
    #[error("ill-posed interpolation: sample points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("singular linear system")]
    Singular,
    #[error("root finder did not converge")]
    NoConvergence,
}
