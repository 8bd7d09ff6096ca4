//! Weierstrass ℘, ℘′ and the lattice invariants g₂, g₃.
//!
//! Two evaluation paths are kept side by side: [`Weierstrass`] (basis
//! reduction, Laurent series, duplication) for production use, and the
//! truncated lattice sums in [`sums`] which serve as an independent oracle.

mod lattice;
mod series;
pub mod sums;

pub use lattice::{PeriodLattice, ReducedBasis};
pub use series::{half_period_roots, wp, wp_prime, Weierstrass, WeierstrassOptions};
pub use sums::{eisenstein_invariants, wp_lattice_sum, EisensteinSum};

use crate::C64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("degenerate lattice: period ratio {ratio} is (numerically) real")]
    DegenerateLattice { ratio: C64 },
    #[error("non-finite period")]
    NonFinitePeriod,
    #[error("degenerate invariants: discriminant {discriminant:e} below tolerance")]
    DegenerateInvariants { discriminant: f64 },
    #[error("z = {z} lies on a lattice point (distance {distance:e})")]
    Pole { z: C64, distance: f64 },
    #[error("series did not reach tolerance; achieved error bound {bound:e}")]
    Accuracy { bound: f64 },
    #[error("cutoff {0} below minimum of 10")]
    InvalidCutoff(usize),
}

/// Invariants g₂, g₃ of the cubic 4x³ − g₂x − g₃.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EllipticInvariants {
    pub g2: C64,
    pub g3: C64,
}

impl EllipticInvariants {
    pub const DEFAULT_TOL: f64 = 1e-12;

    pub fn new(g2: C64, g3: C64) -> Result<Self, EllipticError> {
        Self::with_tolerance(g2, g3, Self::DEFAULT_TOL)
    }

    /// Rejects |g₂³ − 27g₃²| ≤ tol·(|g₂|³ + 27|g₃|²).
    pub fn with_tolerance(g2: C64, g3: C64, tol: f64) -> Result<Self, EllipticError> {
        let disc = g2 * g2 * g2 - 27.0 * g3 * g3;
        let scale = g2.norm().powi(3) + 27.0 * g3.norm_sqr();
        if !disc.is_finite() || disc.norm() <= tol * scale || scale == 0.0 {
            return Err(EllipticError::DegenerateInvariants {
                discriminant: disc.norm(),
            });
        }
        Ok(Self { g2, g3 })
    }

    pub fn discriminant(&self) -> C64 {
        self.g2 * self.g2 * self.g2 - 27.0 * self.g3 * self.g3
    }

    /// 4x³ − g₂x − g₃.
    pub fn cubic(&self, x: C64) -> C64 {
        4.0 * x * x * x - self.g2 * x - self.g3
    }
}
