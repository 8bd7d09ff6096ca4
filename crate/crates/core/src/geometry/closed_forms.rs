//! Closed-form coefficients h, l, f, g̃ of the dX² and dX¹ solution formulas.
//!
//! The printed values are reproduced literally. The oracle expands the
//! generic single-stage solution formula (numerator and denominator
//! multiplied through by C) as polynomials in dX¹ (for h, l) or in ρ (for f,
//! g̃), using the printed stage coefficients, so disagreements isolate the
//! algebra of these closed forms.

use serde::{Deserialize, Serialize};

use super::{printed_stage1, printed_stage2, GeometryData, KCoefficients};
use crate::audit::AuditRow;
use crate::poly::DensePoly;
use crate::ratios::RatioSet;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInputs {
    pub rho: C64,
    /// K-coefficients at m = ρ and the stage-3 d/c.
    pub k: KCoefficients,
    pub stage2: RatioSet,
    pub stage1: RatioSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormCoefficients {
    pub h: [C64; 3],
    pub l: [C64; 3],
    pub big_f: [C64; 3],
    /// f₄ has no printed formula; `None` on the printed side.
    pub f: [Option<C64>; 4],
    pub gt: [C64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub printed: ClosedFormCoefficients,
    pub oracle: ClosedFormCoefficients,
    pub rows: Vec<AuditRow>,
}

impl ClosedFormCoefficients {
    pub fn printed(geom: &GeometryData, inp: &ClosedFormInputs) -> Self {
        let p = geom.p();
        let gl = |i: usize, l: usize, k: usize| super::lowered(geom, i - 1, l - 1, k - 1);
        let (k1, k2) = (inp.k.k1, inp.k.k2);
        let rho = inp.rho;

        let s2 = inp.stage2;
        let l1 = s2.l1();
        let pre_h = s2.b_over_c - 2.0 * s2.b_over_d * l1 * rho;
        let pre_l = s2.d_over_c - 2.0 * s2.b_over_d * l1;
        let quad_x1 = 2.0 * gl(1, 2, 1) + gl(1, 1, 2);
        let lin_b2 = 2.0 * gl(1, 2, 2) + gl(2, 2, 1);
        let k_sym = k1[0][1] + k1[1][0];
        let h = [
            2.0 * p * pre_h * quad_x1,
            pre_h * k_sym - 2.0 * p * l1 * rho * lin_b2,
            pre_h * k2[1] - l1 * rho * k1[1][1],
        ];
        let l = [
            2.0 * p * pre_l * quad_x1,
            pre_l * k_sym - 2.0 * p * l1 * lin_b2,
            pre_l * k2[1] - l1 * k1[1][1],
        ];

        let st1 = printed_stage1(geom, &inp.k, rho, s2.d_over_c);
        let big_f = [st1.f1, st1.f2, st1.f3];
        let s1 = inp.stage1;
        let m1 = s1.l1();
        let f = [
            Some(-2.0 * s1.b_over_d * m1 * st1.f1),
            Some(s1.b_over_c * st1.f1 - m1 * st1.f3 - 2.0 * s1.b_over_d * m1 * st1.f2),
            Some(s1.b_over_c * st1.f2 - m1),
            None,
        ];
        let pre_g = s1.d_over_c - 2.0 * s1.b_over_d;
        let gt = [
            pre_g * st1.f1,
            pre_g * st1.f2 - m1 * st1.f3,
            pre_g * k2[0] - m1 * k1[0][0],
        ];
        Self { h, l, big_f, f, gt }
    }

    pub fn oracle(geom: &GeometryData, inp: &ClosedFormInputs) -> Self {
        let rho = inp.rho;
        let s2 = inp.stage2;
        // C₂, B₂ as polynomials in dX¹ (x₁ value is irrelevant for the polys)
        let st2 = printed_stage2(geom, &inp.k, rho, C64::new(0.0, 0.0));
        let (b2, c2) = (&st2.b_poly, &st2.c_poly);
        let num2 = &c2.scale(s2.b_over_c - s2.l2() * rho) - &b2.scale(s2.l1() * rho);
        let den2 = &c2.scale(s2.d_over_c - s2.l2()) - &b2.scale(s2.l1());
        let h = [num2.coeff(2), num2.coeff(1), num2.coeff(0)];
        let l = [den2.coeff(2), den2.coeff(1), den2.coeff(0)];

        let st1 = printed_stage1(geom, &inp.k, rho, s2.d_over_c);
        let c1 = DensePoly::new(vec![inp.k.k2[0], st1.f2, st1.f1]).expect("quadratic");
        let b1 = DensePoly::linear(inp.k.k1[0][0], st1.f3);
        let s1 = inp.stage1;
        let x = DensePoly::linear(C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        let times_rho = |q: &DensePoly<C64>| q.mul(&x).expect("degree within bounds");
        let num1 = &(&c1.scale(s1.b_over_c) - &times_rho(&c1).scale(s1.l2()))
            - &times_rho(&b1).scale(s1.l1());
        let den1 = &c1.scale(s1.d_over_c - s1.l2()) - &b1.scale(s1.l1());
        Self {
            h,
            l,
            big_f: [st1.f1, st1.f2, st1.f3],
            f: [
                Some(num1.coeff(3)),
                Some(num1.coeff(2)),
                Some(num1.coeff(1)),
                Some(num1.coeff(0)),
            ],
            gt: [den1.coeff(2), den1.coeff(1), den1.coeff(0)],
        }
    }
}

/// Printed and oracle coefficient sets plus their discrepancy rows.
///
/// F₁..F₃ are compared against the first-principles stage-1 coefficients
/// supplied in `derived_f` (ρ², ρ¹ coefficients of C₁ and ρ¹ of B₁).
pub fn closed_form_coefficients(
    geom: &GeometryData,
    inputs: &ClosedFormInputs,
    derived_f: [C64; 3],
) -> ClosedFormReport {
    let printed = ClosedFormCoefficients::printed(geom, inputs);
    let oracle = ClosedFormCoefficients::oracle(geom, inputs);
    let mut rows = Vec::new();
    let labels = ["h1", "h2", "h3"];
    for i in 0..3 {
        rows.push(AuditRow::compare(
            labels[i],
            &format!("h{}", i + 1),
            printed.h[i],
            oracle.h[i],
        ));
    }
    let labels = ["l1", "l2", "l3"];
    for i in 0..3 {
        rows.push(AuditRow::compare(
            labels[i],
            &format!("l{}", i + 1),
            printed.l[i],
            oracle.l[i],
        ));
    }
    let labels = ["F1-F2", "F1-F2", "F3"];
    for i in 0..3 {
        rows.push(AuditRow::compare(
            labels[i],
            &format!("F{}", i + 1),
            printed.big_f[i],
            derived_f[i],
        ));
    }
    let labels = ["f1-f3", "f2", "f1-f3"];
    for i in 0..3 {
        let pf = printed.f[i].expect("printed f1..f3");
        let of = oracle.f[i].expect("oracle f");
        rows.push(AuditRow::compare(labels[i], &format!("f{}", i + 1), pf, of));
    }
    rows.push(AuditRow::unprinted(
        "stage1-solution",
        "f4",
        oracle.f[3].expect("oracle f4"),
    ));
    let labels = ["g-tilde1", "g-tilde2", "g-tilde3"];
    for i in 0..3 {
        rows.push(AuditRow::compare(
            labels[i],
            &format!("gt{}", i + 1),
            printed.gt[i],
            oracle.gt[i],
        ));
    }
    ClosedFormReport {
        printed,
        oracle,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::AuditStatus;
    use crate::geometry::{identity_mat, k_coefficients, zero_mat, zero_tensor};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn geometry() -> GeometryData {
        let mut gamma = zero_tensor();
        let mut v = 0.05f64;
        for r in 0..3 {
            for i in 0..3 {
                for j in i..3 {
                    gamma[r][i][j] = c(v.sin(), (2.0 * v).cos() * 0.3);
                    gamma[r][j][i] = gamma[r][i][j];
                    v += 0.61;
                }
            }
        }
        let mut ric = zero_mat();
        for i in 0..3 {
            for j in 0..3 {
                ric[i][j] = c(0.2 * (i + j + 2 * i * j) as f64 - 0.5, 0.0);
            }
        }
        GeometryData::new(1.1, identity_mat(), gamma, ric).unwrap()
    }

    fn inputs(geom: &GeometryData, rho: C64, b2c2: C64) -> ClosedFormInputs {
        let c_over_d = c(0.8, 0.3);
        let stage2 = RatioSet::from_unknowns(b2c2 * c_over_d, c_over_d).unwrap();
        ClosedFormInputs {
            rho,
            k: k_coefficients(geom, rho, c(0.4, -0.2)),
            stage2,
            stage1: RatioSet::from_unknowns(c(-0.7, 0.4), c(1.3, 0.1)).unwrap(),
        }
    }

    #[test]
    fn h1_vanishes_at_zero_rho_and_zero_ratio() {
        let geom = geometry();
        let mut inp = inputs(&geom, c(0.0, 0.0), c(1.0, 0.0));
        inp.stage2 = RatioSet {
            b_over_c: c(0.0, 0.0),
            ..inp.stage2
        };
        let pr = ClosedFormCoefficients::printed(&geom, &inp);
        assert_eq!(pr.h[0], c(0.0, 0.0));
    }

    #[test]
    fn f1_vanishes_without_connection() {
        let geom = GeometryData::new(1.0, identity_mat(), zero_tensor(), identity_mat()).unwrap();
        let inp = inputs(&geom, c(0.3, 0.1), c(1.0, 0.0));
        assert_eq!(
            ClosedFormCoefficients::printed(&geom, &inp).big_f[0],
            c(0.0, 0.0)
        );
    }

    #[test]
    fn report_has_a_row_per_coefficient() {
        let geom = geometry();
        let inp = inputs(&geom, c(0.3, -0.6), c(0.9, 0.2));
        let rep = closed_form_coefficients(&geom, &inp, [c(0.0, 0.0); 3]);
        assert_eq!(rep.rows.len(), 3 + 3 + 3 + 4 + 3);
        assert_eq!(
            rep.rows
                .iter()
                .filter(|r| r.status == AuditStatus::Unprinted)
                .count(),
            1
        );
    }

    #[test]
    fn l2_terms_agree_when_l2_equals_twice_bd_l1() {
        // the printed prefactor uses 2(b/d)L₁ where the expansion has L₂;
        // they coincide when b/d = 1
        let geom = geometry();
        let mut inp = inputs(&geom, c(0.3, -0.6), c(0.9, 0.2));
        inp.stage2 = RatioSet::from_unknowns(c(1.0, 0.0), c(0.7, 0.2)).unwrap();
        let (pr, or) = (
            ClosedFormCoefficients::printed(&geom, &inp),
            ClosedFormCoefficients::oracle(&geom, &inp),
        );
        for i in 0..3 {
            assert!((pr.h[i] - or.h[i]).norm() < 1e-12 * (1.0 + or.h[i].norm()));
            assert!((pr.l[i] - or.l[i]).norm() < 1e-12 * (1.0 + or.l[i].norm()));
        }
    }
}
