use serde::{Deserialize, Serialize};

use super::{zero_mat, zero_tensor, Axis, GeometryData, Mat3, Tensor3};
use crate::C64;

/// Σ T_ijk xⁱxʲxᵏ + Σ S_ij xⁱxʲ with T fully symmetric and S symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicForm {
    pub t: Tensor3,
    pub s: Mat3,
}

impl CubicForm {
    pub fn evaluate(&self, x: [C64; 3]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let xij = x[i] * x[j];
                acc += self.s[i][j] * xij;
                for k in 0..3 {
                    acc += self.t[i][j][k] * xij * x[k];
                }
            }
        }
        acc
    }

    /// Σ|T_ijk||x|³ + Σ|S_ij||x|², a scale for relative residuals.
    pub fn magnitude(&self, x: [C64; 3]) -> f64 {
        let r = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let t: f64 = self.t.iter().flatten().flatten().map(|z| z.norm()).sum();
        let s: f64 = self.s.iter().flatten().map(|z| z.norm()).sum();
        t * r.powi(3) + s * r * r
    }

    /// (ΣT_ijk, ΣS_ij): the form vanishes on the diagonal x₁ = x₂ = x₃ iff
    /// both are zero.
    pub fn diagonal_sums(&self) -> (C64, C64) {
        (
            self.t.iter().flatten().flatten().sum(),
            self.s.iter().flatten().sum(),
        )
    }
}

/// Mean over the six index permutations.
pub fn symmetrize(w: &Tensor3) -> Tensor3 {
    let mut t = zero_tensor();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                t[i][j][k] =
                    (w[i][j][k] + w[i][k][j] + w[j][i][k] + w[j][k][i] + w[k][i][j] + w[k][j][i])
                        / 6.0;
            }
        }
    }
    t
}

/// T = sym(p Σ_r Γ^r_il g_kr), S = −R.
pub fn assemble_cubic(geom: &GeometryData) -> CubicForm {
    let (g, gamma) = (geom.metric(), geom.gamma());
    let mut w = zero_tensor();
    for k in 0..3 {
        for i in 0..3 {
            for l in 0..3 {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..3 {
                    acc += gamma[r][i][l] * g[k][r];
                }
                w[i][l][k] = acc * geom.p();
            }
        }
    }
    let mut s = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            s[i][j] = -geom.ricci()[i][j];
        }
    }
    CubicForm {
        t: symmetrize(&w),
        s,
    }
}

/// A t³ + B t² + C t + G along one axis with the other two fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisView {
    pub axis: Axis,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub g: C64,
}

impl AxisView {
    pub fn coeffs(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.g]
    }

    pub fn eval(&self, t: C64) -> C64 {
        ((self.a * t + self.b) * t + self.c) * t + self.g
    }

    /// Derivative of the cubic in t.
    pub fn eval_prime(&self, t: C64) -> C64 {
        (3.0 * self.a * t + 2.0 * self.b) * t + self.c
    }
}

/// `fixed` holds the other two differentials in increasing axis order.
pub fn axis_view(cubic: &CubicForm, axis: Axis, fixed: [C64; 2]) -> AxisView {
    let a = axis.index();
    let others = axis.others();
    let (t, s) = (&cubic.t, &cubic.s);
    let zero = C64::new(0.0, 0.0);
    let (mut b, mut c, mut g) = (s[a][a], zero, zero);
    for (p, &i) in others.iter().enumerate() {
        let xi = fixed[p];
        b += 3.0 * t[a][a][i] * xi;
        c += 2.0 * s[a][i] * xi;
        for (q, &j) in others.iter().enumerate() {
            let xij = xi * fixed[q];
            c += 3.0 * t[a][i][j] * xij;
            g += s[i][j] * xij;
            for (r, &k) in others.iter().enumerate() {
                g += t[i][j][k] * xij * fixed[r];
            }
        }
    }
    AxisView {
        axis,
        a: t[a][a][a],
        b,
        c,
        g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{identity_mat, zero_tensor};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample_geometry() -> GeometryData {
        let mut gamma = zero_tensor();
        let mut v = 0.1;
        for r in 0..3 {
            for i in 0..3 {
                for j in i..3 {
                    gamma[r][i][j] = c(v, 0.3 - v);
                    gamma[r][j][i] = gamma[r][i][j];
                    v += 0.17;
                }
            }
        }
        let mut g = identity_mat();
        g[0][1] = c(0.2, 0.0);
        g[1][0] = g[0][1];
        g[2][2] = c(1.5, 0.0);
        let mut ric = zero_mat();
        for i in 0..3 {
            for j in 0..3 {
                ric[i][j] = c((i + j) as f64 * 0.3 - 0.4, 0.1 * (i * j) as f64);
            }
        }
        GeometryData::new(0.8, g, gamma, ric).unwrap()
    }

    /// Raw triple/double contraction of the geometric terms.
    fn raw(geom: &GeometryData, x: [C64; 3]) -> C64 {
        let mut acc = c(0.0, 0.0);
        for i in 0..3 {
            for l in 0..3 {
                acc -= geom.ricci()[i][l] * x[i] * x[l];
                for k in 0..3 {
                    for r in 0..3 {
                        acc += geom.p()
                            * geom.gamma()[r][i][l]
                            * geom.metric()[k][r]
                            * x[i]
                            * x[l]
                            * x[k];
                    }
                }
            }
        }
        acc
    }

    #[test]
    fn zero_connection_gives_zero_cubic_part() {
        let geom = GeometryData::new(1.0, identity_mat(), zero_tensor(), identity_mat()).unwrap();
        let f = assemble_cubic(&geom);
        assert!(f.t.iter().flatten().flatten().all(|z| z.norm() == 0.0));
        for axis in Axis::ALL {
            assert_eq!(
                axis_view(&f, axis, [c(1.0, 2.0), c(-3.0, 0.5)]).a,
                c(0.0, 0.0)
            );
        }
    }

    #[test]
    fn single_connection_entry() {
        let mut gamma = zero_tensor();
        gamma[0][0][0] = c(1.0, 0.0);
        let geom = GeometryData::new(1.0, identity_mat(), gamma, zero_mat()).unwrap();
        let f = assemble_cubic(&geom);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let expect = if i + j + k == 0 { 1.0 } else { 0.0 };
                    assert_eq!(f.t[i][j][k], c(expect, 0.0));
                }
            }
        }
    }

    #[test]
    fn evaluation_matches_raw_contraction() {
        let geom = sample_geometry();
        let f = assemble_cubic(&geom);
        let x = [c(0.3, -1.0), c(1.2, 0.4), c(-0.7, 0.9)];
        let (a, b) = (f.evaluate(x), raw(&geom, x));
        assert!((a - b).norm() < 1e-13 * b.norm());
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let f = assemble_cubic(&sample_geometry());
        let again = symmetrize(&f.t);
        for (x, y) in again
            .iter()
            .flatten()
            .flatten()
            .zip(f.t.iter().flatten().flatten())
        {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn view_reproduces_form_on_every_axis() {
        let f = assemble_cubic(&sample_geometry());
        let fixed = [c(0.4, 0.1), c(-1.1, 0.6)];
        for axis in Axis::ALL {
            let v = axis_view(&f, axis, fixed);
            for t in [c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)] {
                let mut x = [c(0.0, 0.0); 3];
                x[axis.index()] = t;
                let o = axis.others();
                x[o[0]] = fixed[0];
                x[o[1]] = fixed[1];
                let expect = f.evaluate(x);
                assert!((v.eval(t) - expect).norm() < 1e-13 * (1.0 + expect.norm()));
            }
        }
    }

    #[test]
    fn zero_fixed_values_leave_minus_ricci() {
        let geom = sample_geometry();
        let v = axis_view(&assemble_cubic(&geom), Axis::X3, [c(0.0, 0.0); 2]);
        assert_eq!(v.b, -geom.ricci()[2][2]);
        assert_eq!(v.c, c(0.0, 0.0));
        assert_eq!(v.g, c(0.0, 0.0));
    }
}
