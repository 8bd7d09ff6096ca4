use std::ops::{Add, Neg, Sub};

use super::PolyError;
use crate::scalar::Scalar;
use crate::C64;

pub const MAX_DEGREE: usize = 8;

/// Coefficients constant term first; trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> DensePoly<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self, PolyError> {
        let p = Self::trimmed(coeffs);
        match p.degree() {
            Some(d) if d > MAX_DEGREE => Err(PolyError::DegreeExceeded {
                degree: d,
                max: MAX_DEGREE,
            }),
            _ => Ok(p),
        }
    }

    fn trimmed(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::trimmed(vec![c])
    }

    /// c·x^k.
    pub fn monomial(c: T, k: usize) -> Result<Self, PolyError> {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// α + βx.
    pub fn linear(alpha: T, beta: T) -> Self {
        Self::trimmed(vec![alpha, beta])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::trimmed(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, PolyError> {
        let mut acc = Self::constant(T::one());
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        Self::trimmed(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_int(k as i64))
                .collect(),
        )
    }

    /// x ↦ p(α + βx).
    pub fn compose_affine(&self, alpha: T, beta: T) -> Self {
        let lin = Self::linear(alpha, beta);
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            // degree never grows, so the multiplication cannot fail
            acc = &acc.mul(&lin).expect("affine composition keeps degree") + &Self::constant(c);
        }
        acc
    }

    /// Zeroes coefficients below `tol` times the largest one.
    pub fn chop(&self, tol: f64) -> Self {
        let big = self.coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max);
        Self::trimmed(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c.modulus() <= tol * big {
                        T::zero()
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }
}

impl<T: Scalar> Add for &DensePoly<T> {
    type Output = DensePoly<T>;
    fn add(self, rhs: Self) -> DensePoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::trimmed((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &DensePoly<T> {
    type Output = DensePoly<T>;
    fn sub(self, rhs: Self) -> DensePoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::trimmed((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Neg for &DensePoly<T> {
    type Output = DensePoly<T>;
    fn neg(self) -> DensePoly<T> {
        DensePoly::trimmed(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl DensePoly<C64> {
    /// All complex roots with multiplicity. Closed form up to degree 2,
    /// Durand–Kerner with Newton polishing above.
    pub fn roots(&self) -> Result<Vec<C64>, PolyError> {
        let n = match self.degree() {
            None | Some(0) => return Ok(Vec::new()),
            Some(n) => n,
        };
        let lead = self.coeffs[n];
        let monic: Vec<C64> = self.coeffs.iter().map(|&c| c / lead).collect();
        match n {
            1 => Ok(vec![-monic[0]]),
            2 => Ok(quadratic_roots(monic[1], monic[0]).to_vec()),
            _ => durand_kerner(&monic),
        }
    }
}

/// Roots of x² + bx + c, avoiding cancellation.
pub(crate) fn quadratic_roots(b: C64, c: C64) -> [C64; 2] {
    let disc = (b * b - 4.0 * c).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) * 0.5
    } else {
        -(b - disc) * 0.5
    };
    if q.norm() == 0.0 {
        return [C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    }
    [q, c / q]
}

fn durand_kerner(monic: &[C64]) -> Result<Vec<C64>, PolyError> {
    let n = monic.len() - 1;
    let p = |x: C64| {
        monic
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
    };
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n)
        .map(|k| seed.powu(k as u32) * bound.min(1e3))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                z[i] += C64::new(1e-8, 1e-8) * bound;
                moved = f64::INFINITY;
                continue;
            }
            let step = p(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            let poly = DensePoly::new(monic.to_vec())?;
            let dp = poly.derivative();
            for r in z.iter_mut() {
                for _ in 0..3 {
                    let d = dp.eval(*r);
                    if d.norm() > 0.0 {
                        *r -= poly.eval(*r) / d;
                    }
                }
            }
            return Ok(z);
        }
    }
    Err(PolyError::NoConvergence)
}
