//! Scalar abstraction shared by the polynomial layer.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num};

/// Field-like scalar: real, complex or exact rational.
pub trait Scalar: Num + Copy + Debug + Neg<Output = Self> + FromPrimitive + 'static {
    fn conj(self) -> Self;

    /// Absolute value as `f64`, used for pivoting and tolerances.
    fn modulus(self) -> f64;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits scalar")
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn modulus(self) -> f64 {
                (self as f64).abs()
            }
        }

        impl Scalar for Complex<$t> {
            #[inline]
            fn conj(self) -> Self {
                Complex::conj(&self)
            }
            #[inline]
            fn modulus(self) -> f64 {
                self.norm() as f64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

impl Scalar for Ratio<i64> {
    fn conj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        (*self.numer() as f64 / *self.denom() as f64).abs()
    }
}

impl Scalar for Ratio<i128> {
    fn conj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        (*self.numer() as f64 / *self.denom() as f64).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_matches_abs() {
        assert_eq!((-2.5f64).modulus(), 2.5);
        assert_eq!(Complex::new(3.0f64, 4.0).modulus(), 5.0);
        assert_eq!(Ratio::new(-3i64, 4).modulus(), 0.75);
    }

    #[test]
    fn conj_flips_imaginary_part_only() {
        assert_eq!(Complex::new(1.0f64, 2.0).conj(), Complex::new(1.0, -2.0));
        assert_eq!(Ratio::new(1i64, 3).conj(), Ratio::new(1, 3));
    }
}
