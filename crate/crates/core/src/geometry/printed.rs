//! Coefficient formulas exactly as printed for the three stages.
//!
//! These are kept verbatim for the audit and the printed evaluation route;
//! [`axis_view`](super::axis_view) on the assembled form is the reference.

use serde::{Deserialize, Serialize};

use super::{AxisView, GeometryData};
use crate::poly::{DensePoly, MobiusQuadruple};
use crate::C64;

/// Σ_r Γ^r_il g_kr, zero-based indices.
pub fn lowered(geom: &GeometryData, i: usize, l: usize, k: usize) -> C64 {
    (0..3)
        .map(|r| geom.gamma()[r][i][l] * geom.metric()[k][r])
        .sum()
}

/// One-based shorthand: gl(geom, i, l, k) = Γ^r_il g_kr.
fn gl(geom: &GeometryData, i: usize, l: usize, k: usize) -> C64 {
    lowered(geom, i - 1, l - 1, k - 1)
}

fn ric(geom: &GeometryData, i: usize, j: usize) -> C64 {
    geom.ricci()[i - 1][j - 1]
}

/// K⁽¹⁾_αβ (2×2) and K⁽²⁾_α, α, β ∈ {1, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KCoefficients {
    pub k1: [[C64; 2]; 2],
    pub k2: [C64; 2],
}

/// K⁽¹⁾_αβ = −R_αβ + 2p m (1 + 2δ)(2Γ^r_αβ g_3r + Γ^r_3α g_βr),
/// K⁽²⁾_α = 2m [3p m Γ^r_α3 g_3r − (1 + 2δ) R_α3], with δ = d/c.
pub fn k_coefficients(geom: &GeometryData, m: C64, d_over_c: C64) -> KCoefficients {
    let p = geom.p();
    let w = 1.0 + 2.0 * d_over_c;
    let mut k1 = [[C64::new(0.0, 0.0); 2]; 2];
    let mut k2 = [C64::new(0.0, 0.0); 2];
    for a in 1..=2 {
        for b in 1..=2 {
            k1[a - 1][b - 1] =
                -ric(geom, a, b) + 2.0 * p * m * w * (2.0 * gl(geom, a, b, 3) + gl(geom, 3, a, b));
        }
        k2[a - 1] = 2.0 * m * (3.0 * p * m * gl(geom, a, 3, 3) - w * ric(geom, a, 3));
    }
    KCoefficients { k1, k2 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedStage3 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

/// A₃ = 2pΓ^r_33 g_3r, B₃ = 6pΓ^r_α3 g_3r dX^α − R_33,
/// C₃ = −2R_α3 dX^α + 2p(Γ^r_αβ g_3r + 2Γ^r_3β g_αr) dX^α dX^β.
pub fn printed_stage3(geom: &GeometryData, x1: C64, x2: C64) -> PrintedStage3 {
    let p = geom.p();
    let x = [x1, x2];
    let a = 2.0 * p * gl(geom, 3, 3, 3);
    let mut b = -ric(geom, 3, 3);
    let mut c = C64::new(0.0, 0.0);
    for al in 1..=2 {
        b += 6.0 * p * gl(geom, al, 3, 3) * x[al - 1];
        c -= 2.0 * ric(geom, al, 3) * x[al - 1];
        for be in 1..=2 {
            c +=
                2.0 * p * (gl(geom, al, be, 3) + 2.0 * gl(geom, 3, be, al)) * x[al - 1] * x[be - 1];
        }
    }
    PrintedStage3 { a, b, c }
}

/// Left-hand side of the printed two-variable cubic at (dX¹, dX²) with m = a₃/c₃.
/// The bracket Γ^r_γ(α g_β)r is read as the mean over α ↔ β.
pub fn printed_two_variable_equation(
    geom: &GeometryData,
    k: &KCoefficients,
    m: C64,
    x1: C64,
    x2: C64,
) -> C64 {
    let p = geom.p();
    let x = [x1, x2];
    let mut acc = 2.0 * p * m * m * m * gl(geom, 3, 3, 3);
    for ga in 1..=2 {
        acc += k.k2[ga - 1] * x[ga - 1];
        for al in 1..=2 {
            acc += k.k1[ga - 1][al - 1] * x[ga - 1] * x[al - 1];
            for be in 1..=2 {
                let sym = 0.5 * (gl(geom, ga, al, be) + gl(geom, ga, be, al));
                acc += p * sym * x[ga - 1] * x[al - 1] * x[be - 1];
            }
        }
    }
    acc
}

/// Printed stage-2 coefficients; `b_poly`, `c_poly` are B₂, C₂ as
/// polynomials in dX¹.
#[derive(Debug, Clone, PartialEq)]
pub struct PrintedStage2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub g: C64,
    pub b_poly: DensePoly<C64>,
    pub c_poly: DensePoly<C64>,
}

/// A₂ = 2pΓ^r_22 g_2r, B₂ = K⁽¹⁾_22 + 2p[2Γ^r_12 g_2r + Γ^r_22 g_1r] dX¹,
/// C₂ = 2p[Γ^r_11 g_2r + 2Γ^r_12 g_1r](dX¹)² + (K⁽¹⁾_12 + K⁽¹⁾_21) dX¹ + K⁽²⁾_2,
/// G¹ = 2pΓ^r_11 g_1r (dX¹)³ + K⁽¹⁾_11 (dX¹)² + K⁽²⁾_1 dX¹ + 2pρ³Γ^r_33 g_3r.
pub fn printed_stage2(geom: &GeometryData, k: &KCoefficients, rho: C64, x1: C64) -> PrintedStage2 {
    let p = geom.p();
    let a = 2.0 * p * gl(geom, 2, 2, 2);
    let b_poly = DensePoly::linear(
        k.k1[1][1],
        2.0 * p * (2.0 * gl(geom, 1, 2, 2) + gl(geom, 2, 2, 1)),
    );
    let c_poly = DensePoly::new(vec![
        k.k2[1],
        k.k1[0][1] + k.k1[1][0],
        2.0 * p * (gl(geom, 1, 1, 2) + 2.0 * gl(geom, 1, 2, 1)),
    ])
    .expect("quadratic");
    let g = 2.0 * p * gl(geom, 1, 1, 1) * x1 * x1 * x1
        + k.k1[0][0] * x1 * x1
        + k.k2[0] * x1
        + 2.0 * p * rho * rho * rho * gl(geom, 3, 3, 3);
    PrintedStage2 {
        a,
        b: b_poly.eval(x1),
        c: c_poly.eval(x1),
        g,
        b_poly,
        c_poly,
    }
}

/// Printed stage-1 coefficients together with F₁, F₂, F₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedStage1 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub g: C64,
    pub f1: C64,
    pub f2: C64,
    pub f3: C64,
}

/// A₁ = 2pΓ^r_11 g_1r, B₁ = F₃ρ + K⁽¹⁾_11, C₁ = F₁ρ² + F₂ρ + K⁽²⁾_1,
/// G⁰ = 2p[Γ^r_22 g_2r + Γ^r_33 g_3r]ρ³ + K⁽¹⁾_22 ρ², with
/// F₁ = 2p(2Γ^r_12 g_2r + Γ^r_22 g_1r), F₂ = (1 + 2d₂/c₂)(K⁽¹⁾_12 + K⁽¹⁾_21),
/// F₃ = 2p(1 + 2d₂/c₂)(2Γ^r_12 g_1r + Γ^r_11 g_2r).
pub fn printed_stage1(
    geom: &GeometryData,
    k: &KCoefficients,
    rho: C64,
    d2_over_c2: C64,
) -> PrintedStage1 {
    let p = geom.p();
    let w = 1.0 + 2.0 * d2_over_c2;
    let f1 = 2.0 * p * (2.0 * gl(geom, 1, 2, 2) + gl(geom, 2, 2, 1));
    let f2 = w * (k.k1[0][1] + k.k1[1][0]);
    let f3 = 2.0 * p * w * (2.0 * gl(geom, 1, 2, 1) + gl(geom, 1, 1, 2));
    PrintedStage1 {
        a: 2.0 * p * gl(geom, 1, 1, 1),
        b: f3 * rho + k.k1[0][0],
        c: f1 * rho * rho + f2 * rho + k.k2[0],
        g: 2.0 * p * (gl(geom, 2, 2, 2) + gl(geom, 3, 3, 3)) * rho * rho * rho
            + k.k1[1][1] * rho * rho,
        f1,
        f2,
        f3,
    }
}

/// Printed elimination condition: G = −a·Q/c³ with
/// Q = A a² + C c² + B a c + 2 c d C. Returns the right-hand side.
pub fn printed_elimination_condition(view: &AxisView, quad: &MobiusQuadruple<C64>) -> C64 {
    let MobiusQuadruple { a, c, d, .. } = *quad;
    let q = view.a * a * a + view.c * c * c + view.b * a * c + 2.0 * c * d * view.c;
    -a * q / (c * c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{identity_mat, zero_mat, zero_tensor, Mat3};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ricci() -> Mat3 {
        let mut r = zero_mat();
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = c(1.0 + (i + j) as f64, 0.5 * (i * j) as f64);
            }
        }
        r
    }

    #[test]
    fn k_at_zero_m_is_minus_ricci() {
        let mut gamma = zero_tensor();
        gamma[1][0][2] = c(0.7, 0.0);
        gamma[1][2][0] = c(0.7, 0.0);
        let geom = GeometryData::new(1.0, identity_mat(), gamma, ricci()).unwrap();
        let k = k_coefficients(&geom, c(0.0, 0.0), c(0.5, 0.0));
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(k.k1[a][b], -geom.ricci()[a][b]);
            }
            assert_eq!(k.k2[a], c(0.0, 0.0));
        }
    }

    #[test]
    fn k_without_connection() {
        let geom = GeometryData::new(1.0, identity_mat(), zero_tensor(), ricci()).unwrap();
        let (m, dc) = (c(1.0, 1.0), c(0.5, 0.0));
        let k = k_coefficients(&geom, m, dc);
        for a in 0..2 {
            assert_eq!(k.k2[a], -2.0 * m * (1.0 + 2.0 * dc) * geom.ricci()[a][2]);
        }
    }

    #[test]
    fn k2_is_quadratic_in_m_and_linear_at_half() {
        let mut gamma = zero_tensor();
        for r in 0..3 {
            gamma[r][0][2] = c(0.3 * r as f64 + 0.1, 0.2);
            gamma[r][2][0] = gamma[r][0][2];
            gamma[r][1][2] = c(-0.4, 0.1 * r as f64);
            gamma[r][2][1] = gamma[r][1][2];
        }
        let geom = GeometryData::new(1.3, identity_mat(), gamma, ricci()).unwrap();
        let dc = c(-0.5, 0.0);
        let f = |m: C64| k_coefficients(&geom, m, dc).k2[0];
        // with 1 + 2δ = 0 the Ricci part drops and K⁽²⁾ ∝ m²
        let (m1, m2) = (c(0.3, 0.1), c(-1.2, 0.7));
        assert!((f(m1) / (m1 * m1) - f(m2) / (m2 * m2)).norm() < 1e-13);
    }

    #[test]
    fn printed_a3_is_twice_the_symmetric_coefficient() {
        let mut gamma = zero_tensor();
        gamma[2][2][2] = c(0.9, -0.2);
        let geom = GeometryData::new(1.0, identity_mat(), gamma, zero_mat()).unwrap();
        let view = crate::geometry::axis_view(
            &crate::geometry::assemble_cubic(&geom),
            crate::geometry::Axis::X3,
            [c(0.0, 0.0); 2],
        );
        let printed = printed_stage3(&geom, c(0.0, 0.0), c(0.0, 0.0));
        assert!((printed.a - 2.0 * view.a).norm() < 1e-15);
        assert_eq!(printed.b, view.b);
    }

    #[test]
    fn elimination_condition_with_zero_a() {
        let view = AxisView {
            axis: crate::geometry::Axis::X3,
            a: c(1.0, 0.0),
            b: c(2.0, 0.0),
            c: c(3.0, 0.0),
            g: c(0.0, 0.0),
        };
        let quad =
            MobiusQuadruple::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(printed_elimination_condition(&view, &quad), c(0.0, 0.0));
    }
}
