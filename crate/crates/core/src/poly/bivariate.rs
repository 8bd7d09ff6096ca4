use super::{DensePoly, PolyError};
use crate::scalar::Scalar;

/// Largest exponent in either variable.
pub const BI_DEGREE: usize = 4;

/// Σ c[i][j] mⁱ nʲ with i, j ≤ 4.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<T> {
    grid: [[T; BI_DEGREE + 1]; BI_DEGREE + 1],
}

impl<T: Scalar> BiPoly<T> {
    pub fn zero() -> Self {
        Self {
            grid: [[T::zero(); BI_DEGREE + 1]; BI_DEGREE + 1],
        }
    }

    pub fn from_grid(grid: [[T; BI_DEGREE + 1]; BI_DEGREE + 1]) -> Self {
        Self { grid }
    }

    /// Builds Σ_j rows[j](m)·nʲ.
    pub fn from_n_coefficients(rows: &[DensePoly<T>]) -> Result<Self, PolyError> {
        let mut out = Self::zero();
        for (j, row) in rows.iter().enumerate() {
            let deg = row.degree().unwrap_or(0);
            if j > BI_DEGREE || deg > BI_DEGREE {
                return Err(PolyError::DegreeExceeded {
                    degree: j.max(deg),
                    max: BI_DEGREE,
                });
            }
            for (i, &c) in row.coeffs().iter().enumerate() {
                out.grid[i][j] = c;
            }
        }
        Ok(out)
    }

    pub fn grid(&self) -> &[[T; BI_DEGREE + 1]; BI_DEGREE + 1] {
        &self.grid
    }

    /// Coefficient of mⁱnʲ.
    pub fn get(&self, i: usize, j: usize) -> T {
        self.grid[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.grid[i][j] = value;
    }

    pub fn eval(&self, m: T, n: T) -> T {
        self.grid.iter().rev().fold(T::zero(), |acc, row| {
            acc * m + row.iter().rev().fold(T::zero(), |inner, &c| inner * n + c)
        })
    }

    /// Coefficient of nʲ as a polynomial in m.
    pub fn coeff_n(&self, j: usize) -> DensePoly<T> {
        DensePoly::new(self.grid.iter().map(|row| row[j]).collect())
            .expect("grid degree within bounds")
    }

    /// Coefficient of mⁱ as a polynomial in n.
    pub fn coeff_m(&self, i: usize) -> DensePoly<T> {
        DensePoly::new(self.grid[i].to_vec()).expect("grid degree within bounds")
    }

    /// Fixes m, leaving a polynomial in n.
    pub fn at_m(&self, m: T) -> DensePoly<T> {
        DensePoly::new((0..=BI_DEGREE).map(|j| self.coeff_n(j).eval(m)).collect())
            .expect("grid degree within bounds")
    }

    /// Largest |c[i][j]| with i or j above the given degrees.
    pub fn excess(&self, max_m: usize, max_n: usize) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.grid.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if i > max_m || j > max_n {
                    worst = worst.max(c.modulus());
                }
            }
        }
        worst
    }
}
