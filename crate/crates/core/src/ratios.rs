//! Ratio bookkeeping for one linear-fractional stage.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RatioError {
    #[error("degenerate ratio: {name} = {value}")]
    Degenerate { name: &'static str, value: C64 },
}

/// b/c, d/c, b/d, c/d of one stage; (b/d, c/d) are the free unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSet {
    pub b_over_c: C64,
    pub d_over_c: C64,
    pub b_over_d: C64,
    pub c_over_d: C64,
}

const ZERO_TOL: f64 = 1e-14;

impl RatioSet {
    /// Requires b/d ≠ 0, c/d ∉ {0, −2}.
    pub fn from_unknowns(b_over_d: C64, c_over_d: C64) -> Result<Self, RatioError> {
        if !(b_over_d.is_finite() && c_over_d.is_finite()) {
            return Err(RatioError::Degenerate {
                name: "b/d",
                value: b_over_d,
            });
        }
        if b_over_d.norm() <= ZERO_TOL {
            return Err(RatioError::Degenerate {
                name: "b/d",
                value: b_over_d,
            });
        }
        if c_over_d.norm() <= ZERO_TOL {
            return Err(RatioError::Degenerate {
                name: "c/d",
                value: c_over_d,
            });
        }
        if (c_over_d + 2.0).norm() <= ZERO_TOL * (1.0 + c_over_d.norm()) {
            return Err(RatioError::Degenerate {
                name: "c/d + 2",
                value: c_over_d,
            });
        }
        Ok(Self {
            b_over_c: b_over_d / c_over_d,
            d_over_c: 1.0 / c_over_d,
            b_over_d,
            c_over_d,
        })
    }

    /// k = (b/d)(c/d)((c/d) + 2).
    pub fn k(&self) -> C64 {
        self.b_over_d * self.c_over_d * (self.c_over_d + 2.0)
    }

    /// L₁ = ½ (b/d)/((c/d) + 2).
    pub fn l1(&self) -> C64 {
        0.5 * self.b_over_d / (self.c_over_d + 2.0)
    }

    /// L₂ = 1/((c/d) + 2).
    pub fn l2(&self) -> C64 {
        1.0 / (self.c_over_d + 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_ratios() {
        let r = RatioSet::from_unknowns(C64::new(2.0, 0.0), C64::new(0.5, 0.0)).unwrap();
        assert_eq!(r.b_over_c, C64::new(4.0, 0.0));
        assert_eq!(r.d_over_c, C64::new(2.0, 0.0));
        assert_eq!(r.k(), C64::new(2.5, 0.0));
        assert_eq!(r.l1(), C64::new(0.4, 0.0));
        assert_eq!(r.l2(), C64::new(0.4, 0.0));
    }

    #[test]
    fn degeneracy_surface() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        assert!(RatioSet::from_unknowns(zero, one).is_err());
        assert!(RatioSet::from_unknowns(one, zero).is_err());
        assert!(RatioSet::from_unknowns(one, C64::new(-2.0, 0.0)).is_err());
        assert!(RatioSet::from_unknowns(one, C64::new(-2.0, 1e-6)).is_ok());
    }
}
