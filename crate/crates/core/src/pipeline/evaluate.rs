use serde::{Deserialize, Serialize};

use super::{Branch, PipelineError, SequencePlan};
use crate::elliptic::Weierstrass;
use crate::geometry::{
    axis_view, k_coefficients, printed_stage1, printed_stage2, printed_stage3, Axis, AxisView,
    ClosedFormCoefficients, ClosedFormInputs, CubicForm,
};
use crate::poly::{interpolate_coeffs, DensePoly};
use crate::ratios::RatioSet;
use crate::C64;

/// |radicand| below this share of its scale makes an isolated evaluation ambiguous.
const AMBIGUITY_TOL: f64 = 1e-10;
const POLE_TOL: f64 = 1e-14;

/// Which formulas produce the triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Per stage, x = ρ + u with u the chosen root of A u² + (3Aρ + B) u + f′(ρ);
    /// closes exactly when the cubic vanishes on the diagonal.
    #[default]
    Derived,
    /// The printed closed forms for dX¹, dX², dX³ with ñ = ℘′.
    Printed,
}

/// Continuity record for the one square root each stage takes.
#[derive(Debug, Clone, Default)]
pub struct BranchTracker {
    prev: [Option<C64>; 3],
    step: usize,
}

impl BranchTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of completed evaluations along the path.
    pub fn steps(&self) -> usize {
        self.step
    }

    pub fn last(&self, axis: Axis) -> Option<C64> {
        self.prev[axis.index()]
    }

    fn advance(&mut self) {
        self.step += 1;
    }
}

struct Roots<'a> {
    z: C64,
    tracker: Option<&'a mut BranchTracker>,
}

impl Roots<'_> {
    fn sqrt(
        &mut self,
        axis: Axis,
        radicand: C64,
        branch: Branch,
        scale: f64,
    ) -> Result<C64, PipelineError> {
        let principal = radicand.sqrt() * branch.sign();
        let Some(tracker) = self.tracker.as_deref_mut() else {
            if radicand.norm() <= AMBIGUITY_TOL * scale {
                return Err(PipelineError::BranchAmbiguity {
                    stage: axis.number(),
                    z: self.z,
                });
            }
            return Ok(principal);
        };
        let chosen = match tracker.prev[axis.index()] {
            None => principal,
            Some(prev) => {
                let r = radicand.sqrt();
                let pick = if (r - prev).norm() <= (r + prev).norm() {
                    r
                } else {
                    -r
                };
                if (pick * prev.conj()).re <= 0.0 {
                    return Err(PipelineError::TrackingStep {
                        stage: axis.number(),
                        index: tracker.step,
                    });
                }
                pick
            }
        };
        tracker.prev[axis.index()] = Some(chosen);
        Ok(chosen)
    }
}

fn checked_div(num: C64, den: C64, scale: f64, axis: Axis, z: C64) -> Result<C64, PipelineError> {
    if den.norm() <= POLE_TOL * scale || !(num / den).is_finite() {
        return Err(PipelineError::PoleOfSolution {
            stage: axis.number(),
            z,
        });
    }
    Ok(num / den)
}

pub(crate) struct StageValues {
    pub values: [C64; 3],
    pub roots: [C64; 3],
}

/// Other root pair of the view, shifted off the known root t = ρ.
fn deflated_root(
    view: &AxisView,
    rho: C64,
    branch: Branch,
    roots: &mut Roots,
) -> Result<(C64, C64), PipelineError> {
    let axis = view.axis;
    let a = view.a;
    let b1 = 3.0 * a * rho + view.b;
    let fp = view.eval_prime(rho);
    let scale = b1.norm_sqr() + (4.0 * a * fp).norm();
    if a.norm() <= POLE_TOL * (b1.norm() + fp.norm()) {
        // the quadratic collapses to b₁u + f′ = 0
        let u = checked_div(-fp, b1, fp.norm().max(1.0), axis, roots.z)?;
        return Ok((rho + u, b1));
    }
    let s = roots.sqrt(
        axis,
        b1 * b1 - 4.0 * a * fp,
        branch,
        scale.max(f64::MIN_POSITIVE),
    )?;
    let plus = -b1 + s;
    let minus = -b1 - s;
    let u = if plus.norm() >= minus.norm() {
        plus / (2.0 * a)
    } else {
        2.0 * fp / minus
    };
    Ok((rho + u, s))
}

/// Isolated-evaluation root of one stage, principal branch times `branch`.
pub(crate) fn isolated_root(
    view: &AxisView,
    rho: C64,
    branch: Branch,
    z: C64,
) -> Result<C64, PipelineError> {
    deflated_root(view, rho, branch, &mut Roots { z, tracker: None }).map(|(x, _)| x)
}

pub(crate) fn derived_triple(
    cubic: &CubicForm,
    rho: C64,
    branches: &[Branch; 3],
    z: C64,
    tracker: Option<&mut BranchTracker>,
) -> Result<StageValues, PipelineError> {
    let mut roots = Roots { z, tracker };
    let v1 = axis_view(cubic, Axis::X1, [rho, rho]);
    let (x1, s1) = deflated_root(&v1, rho, branches[0], &mut roots)?;
    let v2 = axis_view(cubic, Axis::X2, [x1, rho]);
    let (x2, s2) = deflated_root(&v2, rho, branches[1], &mut roots)?;
    let v3 = axis_view(cubic, Axis::X3, [x1, x2]);
    let (x3, s3) = deflated_root(&v3, rho, branches[2], &mut roots)?;
    if let Some(t) = roots.tracker {
        t.advance();
    }
    Ok(StageValues {
        values: [x1, x2, x3],
        roots: [s1, s2, s3],
    })
}

/// Möbius map plus the ñ relation of one stage:
/// dX = (ρn + b/c)/(n + d/c), n = ñ/(√k·√C) − L₁B/C − L₂.
pub(crate) fn generic_solution(
    rho: C64,
    rho_p: C64,
    b: C64,
    c: C64,
    sqrt_c: C64,
    ratios: &RatioSet,
) -> C64 {
    let n = rho_p / (ratios.k().sqrt() * sqrt_c) - ratios.l1() * b / c - ratios.l2();
    (rho * n + ratios.b_over_c) / (n + ratios.d_over_c)
}

fn printed_triple(
    plan: &SequencePlan,
    rho: C64,
    rho_p: C64,
    z: C64,
    tracker: Option<&mut BranchTracker>,
) -> Result<StageValues, PipelineError> {
    let geom = &plan.geometry;
    let mut roots = Roots { z, tracker };
    let (s1, s2, s3) = (
        plan.stage(Axis::X1),
        plan.stage(Axis::X2),
        plan.stage(Axis::X3),
    );
    let (r1, r2, r3) = (*s1.ratios(), *s2.ratios(), *s3.ratios());
    let k = k_coefficients(geom, rho, r3.d_over_c);
    let inputs = ClosedFormInputs {
        rho,
        k,
        stage2: r2,
        stage1: r1,
    };
    let app = ClosedFormCoefficients::printed(geom, &inputs);
    let f4 = ClosedFormCoefficients::oracle(geom, &inputs).f[3].expect("oracle f4");
    let f = [
        app.f[0].expect("printed"),
        app.f[1].expect("printed"),
        app.f[2].expect("printed"),
        f4,
    ];

    let st1 = printed_stage1(geom, &k, rho, r2.d_over_c);
    let scale1 = (st1.f1 * rho * rho).norm() + (st1.f2 * rho).norm() + k.k2[0].norm();
    let q1 = roots.sqrt(Axis::X1, st1.c, s1.branch, scale1.max(f64::MIN_POSITIVE))?;
    let w1 = q1 / r1.k().sqrt();
    let num = rho * rho_p * w1 + ((f[0] * rho + f[1]) * rho + f[2]) * rho + f[3];
    let den = rho_p * w1 + (app.gt[0] * rho + app.gt[1]) * rho + app.gt[2];
    let x1 = checked_div(num, den, num.norm() + 1.0, Axis::X1, z)?;

    let st2 = printed_stage2(geom, &k, rho, x1);
    let scale2 = st2.c_poly.coeffs().iter().map(|c| c.norm()).sum::<f64>() * (1.0 + x1.norm_sqr());
    let q2 = roots.sqrt(Axis::X2, st2.c, s2.branch, scale2.max(f64::MIN_POSITIVE))?;
    let w2 = q2 / r2.k().sqrt();
    let num = rho * rho_p * w2 + (app.h[0] * x1 + app.h[1]) * x1 + app.h[2];
    let den = rho_p * w2 + (app.l[0] * x1 + app.l[1]) * x1 + app.l[2];
    let x2 = checked_div(num, den, num.norm() + 1.0, Axis::X2, z)?;

    let st3 = printed_stage3(geom, x1, x2);
    let scale3 = st3.c.norm() + st3.b.norm() + 1.0;
    let q3 = roots.sqrt(Axis::X3, st3.c, s3.branch, scale3)?;
    if st3.c.norm() == 0.0 {
        return Err(PipelineError::PoleOfSolution { stage: 3, z });
    }
    let sigma = r3.k().sqrt() * q3;
    let lb = r3.l1() * st3.b / st3.c;
    let num = r3.b_over_c + rho * rho_p / sigma - lb * rho - r3.l2() * rho;
    let den = r3.d_over_c + rho_p / sigma - lb - r3.l2();
    let x3 = checked_div(num, den, num.norm() + 1.0, Axis::X3, z)?;

    if let Some(t) = roots.tracker {
        t.advance();
    }
    Ok(StageValues {
        values: [x1, x2, x3],
        roots: [q1, q2, q3],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionTriple {
    pub z: C64,
    pub rho: C64,
    pub rho_prime: C64,
    pub route: Route,
    /// Axis numbers in evaluation order.
    pub order: [u8; 3],
    /// dX¹, dX², dX³.
    pub dx: [C64; 3],
    /// The square root taken by each stage, indexed by axis.
    pub roots: [C64; 3],
    /// The cubic form at (dX¹, dX², dX³).
    pub residual: C64,
    /// |residual| / (1 + max|dX|³).
    pub relative_residual: f64,
}

/// dX¹, then dX² from dX¹, then dX³ from both. With a tracker the square
/// roots continue the previous call's values instead of taking principal
/// branches.
pub fn evaluate_triple(
    plan: &SequencePlan,
    w: &Weierstrass,
    z: C64,
    route: Route,
    tracker: Option<&mut BranchTracker>,
) -> Result<SolutionTriple, PipelineError> {
    let (rho, rho_p) = w.wp_pair(z)?;
    let branches = [Axis::X1, Axis::X2, Axis::X3].map(|a| plan.stage(a).branch);
    let vals = match route {
        Route::Derived => derived_triple(&plan.cubic, rho, &branches, z, tracker)?,
        Route::Printed => printed_triple(plan, rho, rho_p, z, tracker)?,
    };
    let residual = plan.cubic.evaluate(vals.values);
    let big = vals.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(SolutionTriple {
        z,
        rho,
        rho_prime: rho_p,
        route,
        order: [1, 2, 3],
        dx: vals.values,
        roots: vals.roots,
        residual,
        relative_residual: residual.norm() / (1.0 + big.powi(3)),
    })
}

/// The stage-1 radicand as a polynomial in ρ: b₁² − 4Af′ on the derived
/// route, F₁ρ² + F₂ρ + K⁽²⁾₁ on the printed one.
pub fn stage_radicand(plan: &SequencePlan, route: Route) -> DensePoly<C64> {
    let scale = plan.anchor_rho.norm().max(1.0);
    let samples: Vec<(C64, C64)> = (0..5)
        .map(|j| {
            let rho = C64::from_polar(scale, 0.4 + std::f64::consts::TAU * j as f64 / 5.0);
            let value = match route {
                Route::Derived => {
                    let v = axis_view(&plan.cubic, Axis::X1, [rho, rho]);
                    let b1 = 3.0 * v.a * rho + v.b;
                    b1 * b1 - 4.0 * v.a * v.eval_prime(rho)
                }
                Route::Printed => {
                    let r3 = plan.stage(Axis::X3).ratios();
                    let r2 = plan.stage(Axis::X2).ratios();
                    let k = k_coefficients(&plan.geometry, rho, r3.d_over_c);
                    printed_stage1(&plan.geometry, &k, rho, r2.d_over_c).c
                }
            };
            (rho, value)
        })
        .collect();
    let fit = interpolate_coeffs(&samples, 4).expect("distinct samples on a circle");
    // the radicand is quadratic in ρ; drop rounding in the upper coefficients
    DensePoly::new(fit.poly.coeffs().iter().take(3).copied().collect()).expect("quadratic")
}
