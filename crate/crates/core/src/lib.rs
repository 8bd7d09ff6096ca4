#![allow(clippy::needless_range_loop)]
//! Weierstrass-function parametrization of a three-variable cubic.
//!
//! Pipeline, bottom-up:
//! - [`elliptic`]: ℘, ℘′, lattice invariants, direct-sum oracles;
//! - [`poly`]: dense polynomials, Möbius substitution, interpolation;
//! - [`geometry`]: metric/connection/Ricci input, the cubic form, axis views
//!   and the printed coefficient formulas;
//! - [`reduction`]: cubic-term elimination, square completion, normalization;
//! - [`pipeline`]: the three-stage cascade, evaluation, monodromy, audit.

pub mod audit;
pub mod elliptic;
pub mod geometry;
pub mod pipeline;
pub mod poly;
pub mod ratios;
pub mod reduction;
pub mod report;
pub mod scalar;
pub mod scenario;

pub use num_complex::Complex;

/// Double-precision complex scalar used throughout the numeric pipeline.
pub type C64 = Complex<f64>;
/// Single-precision complex, available to the generic polynomial layer.
pub type C32 = Complex<f32>;
/// Exact rational scalar for algebraic identities in tests and audits.
pub type Q64 = num_rational::Ratio<i64>;
