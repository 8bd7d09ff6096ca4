use super::{DensePoly, PolyError, MAX_DEGREE};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant<T> {
    pub poly: DensePoly<T>,
    /// max |p(xᵢ) − yᵢ| / max(1, max |yᵢ|).
    pub residual: f64,
}

/// Fits a polynomial of the given degree through `samples` (point, value).
/// Square systems are solved exactly; over-determined ones in least squares
/// (normal equations plus one refinement step).
pub fn interpolate_coeffs<T: Scalar>(
    samples: &[(T, T)],
    degree: usize,
) -> Result<Interpolant<T>, PolyError> {
    if degree > MAX_DEGREE {
        return Err(PolyError::DegreeExceeded {
            degree,
            max: MAX_DEGREE,
        });
    }
    let cols = degree + 1;
    if samples.len() < cols {
        return Err(PolyError::TooFewSamples {
            needed: cols,
            got: samples.len(),
        });
    }
    let spread = samples.iter().map(|s| s.0.modulus()).fold(0.0, f64::max);
    for i in 0..samples.len() {
        for j in 0..i {
            let gap = (samples[i].0 - samples[j].0).modulus();
            if gap == 0.0 || gap <= 1e-14 * spread {
                return Err(PolyError::DuplicatePoints(j, i));
            }
        }
    }
    let rows: Vec<Vec<T>> = samples
        .iter()
        .map(|&(x, _)| {
            let mut r = Vec::with_capacity(cols);
            let mut p = T::one();
            for _ in 0..cols {
                r.push(p);
                p = p * x;
            }
            r
        })
        .collect();
    let ys: Vec<T> = samples.iter().map(|s| s.1).collect();

    let coeffs = if samples.len() == cols {
        solve_linear(rows.clone(), ys.clone())?
    } else {
        let normal = |rhs: &[T]| -> Result<Vec<T>, PolyError> {
            let mut m = vec![vec![T::zero(); cols]; cols];
            let mut v = vec![T::zero(); cols];
            for (row, &y) in rows.iter().zip(rhs) {
                for i in 0..cols {
                    let ci = row[i].conj();
                    v[i] = v[i] + ci * y;
                    for j in 0..cols {
                        m[i][j] = m[i][j] + ci * row[j];
                    }
                }
            }
            solve_linear(m, v)
        };
        let mut x = normal(&ys)?;
        let r: Vec<T> = rows
            .iter()
            .zip(&ys)
            .map(|(row, &y)| y - dot(row, &x))
            .collect();
        let dx = normal(&r)?;
        for (xi, di) in x.iter_mut().zip(dx) {
            *xi = *xi + di;
        }
        x
    };

    let poly = DensePoly::new(coeffs)?;
    let scale = ys.iter().map(|y| y.modulus()).fold(1.0, f64::max);
    let residual = samples
        .iter()
        .map(|&(x, y)| (poly.eval(x) - y).modulus())
        .fold(0.0, f64::max)
        / scale;
    Ok(Interpolant { poly, residual })
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Gaussian elimination with partial pivoting on a square system.
pub fn solve_linear<T: Scalar>(mut m: Vec<Vec<T>>, mut v: Vec<T>) -> Result<Vec<T>, PolyError> {
    let n = v.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].modulus().total_cmp(&m[j][col].modulus()))
            .ok_or(PolyError::Singular)?;
        if m[pivot][col].is_zero() {
            return Err(PolyError::Singular);
        }
        m.swap(col, pivot);
        v.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = m[col][k];
                m[row][k] = m[row][k] - f * t;
            }
            let t = v[col];
            v[row] = v[row] - f * t;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s = (row + 1..n).fold(v[row], |acc, k| acc - m[row][k] * x[k]);
        x[row] = s / m[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{C64, Q64};

    #[test]
    fn monomial_recovered_exactly() {
        let s: Vec<(Q64, Q64)> = (1..=4)
            .map(|k| {
                let m = Q64::from_integer(k);
                (m, Q64::from_integer(4) * m * m * m)
            })
            .collect();
        let p = interpolate_coeffs(&s, 3).unwrap();
        assert_eq!(
            p.poly.coeffs(),
            &[
                Q64::from_integer(0),
                Q64::from_integer(0),
                Q64::from_integer(0),
                Q64::from_integer(4)
            ]
        );
        assert_eq!(p.residual, 0.0);
    }

    #[test]
    fn constant_data_gives_constant() {
        let p = interpolate_coeffs(&[(1.0, 7.0), (2.0, 7.0)], 1).unwrap();
        assert_eq!(p.poly.coeff(0), 7.0);
        assert_eq!(p.poly.coeff(1), 0.0);
    }

    #[test]
    fn duplicate_points_rejected() {
        assert_eq!(
            interpolate_coeffs(&[(1.0, 2.0), (1.0, 3.0), (2.0, 1.0)], 2),
            Err(PolyError::DuplicatePoints(0, 1))
        );
        assert_eq!(
            interpolate_coeffs(&[(1.0, 2.0)], 1),
            Err(PolyError::TooFewSamples { needed: 2, got: 1 })
        );
    }

    #[test]
    fn least_squares_round_trip() {
        let truth = DensePoly::new(vec![
            C64::new(1.0, -1.0),
            C64::new(0.5, 2.0),
            C64::new(-3.0, 0.0),
            C64::new(0.25, 0.75),
        ])
        .unwrap();
        let s: Vec<(C64, C64)> = (0..6)
            .map(|k| {
                let x = C64::new(k as f64 * 0.7 - 1.5, 0.2 * k as f64);
                (x, truth.eval(x))
            })
            .collect();
        let fit = interpolate_coeffs(&s, 3).unwrap();
        for k in 0..4 {
            assert!((fit.poly.coeff(k) - truth.coeff(k)).norm() < 1e-10);
        }
        assert!(fit.residual < 1e-12);
    }
}
