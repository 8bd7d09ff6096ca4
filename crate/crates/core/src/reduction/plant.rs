use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::poly::DensePoly;
use crate::ratios::RatioSet;
use crate::C64;

/// Axis coefficients (A, B, C) whose depressed form has principal parts
/// (4, 0, −g₂, −g₃) for the cubic with roots (b/d, e₂, e₃), at fixed
/// unknowns (b/d, c/d).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedStage {
    /// The shift L₁B/C + L₂ the coefficients were built around.
    pub shift: C64,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    /// |L₁B/C + L₂ − shift|.
    pub closure: f64,
}

fn poly(c: Vec<C64>) -> DensePoly<C64> {
    DensePoly::new(c).expect("low degree")
}

/// Every admissible planted stage, best closure first.
///
/// The shift s solves H(s) = L₁·Bₙ·D_C + (L₂ − s)·Cₙ = 0 with
/// D_A = 3c²s² − 3cs + 1, D_B = 2c²s² − 3cs + 1, D_C = (cs − 1)², μ = c/(c + 2),
/// Bₙ = 12·b·μ·c²s², Cₙ = 4e₂e₃μ·D_A·D_B − b·Bₙ·(1 − cs) − 4μb²·D_B
/// (b = b/d, c = c/d); then A = 4μ/D_A, B = Bₙ/(D_A·D_B), C = Cₙ/(D_A·D_B·D_C).
pub fn plant_stage_coefficients(
    ratios: &RatioSet,
    e_other: [C64; 2],
) -> Result<Vec<PlantedStage>, ReductionError> {
    let (bd, cd) = (ratios.b_over_d, ratios.c_over_d);
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mu = cd / (cd + 2.0);
    let (l1, l2) = (ratios.l1(), ratios.l2());
    let da = poly(vec![one, -3.0 * cd, 3.0 * cd * cd]);
    let db = poly(vec![one, -3.0 * cd, 2.0 * cd * cd]);
    let dc = poly(vec![one, -2.0 * cd, cd * cd]);
    let bn = poly(vec![zero, zero, 12.0 * bd * mu * cd * cd]);
    let da_db = da.mul(&db)?;
    let cn = &(&da_db.scale(4.0 * e_other[0] * e_other[1] * mu)
        - &bn.mul(&poly(vec![bd, -bd * cd]))?)
        - &db.scale(4.0 * mu * bd * bd);
    let h = &bn.mul(&dc)?.scale(l1) + &cn.mul(&poly(vec![l2, -one]))?;

    let mut out: Vec<PlantedStage> = Vec::new();
    for s in h.roots()? {
        let (va, vb, vc) = (da.eval(s), db.eval(s), dc.eval(s));
        let denom_scale = 1.0 + (cd * s).norm_sqr();
        if [va, vb, vc].iter().any(|v| v.norm() <= 1e-10 * denom_scale) {
            continue;
        }
        let a = 4.0 * mu / va;
        let b = bn.eval(s) / (va * vb);
        let c = cn.eval(s) / (va * vb * vc);
        if c.norm() == 0.0 || !(a.is_finite() && b.is_finite() && c.is_finite()) {
            continue;
        }
        let closure = (l1 * b / c + l2 - s).norm();
        out.push(PlantedStage {
            shift: s,
            a,
            b,
            c,
            closure,
        });
    }
    out.sort_by(|x, y| x.closure.total_cmp(&y.closure));
    Ok(out)
}
