use nalgebra::{DMatrix, DVector, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::evaluate::isolated_root;
use super::{default_anchor, Branch, PipelineError, StageConfig, StageError};
use crate::elliptic::Weierstrass;
use crate::geometry::{
    axis_view, zero_mat, zero_tensor, Axis, AxisView, CubicForm, GeometryData, Mat3, Tensor3,
};
use crate::ratios::RatioSet;
use crate::reduction::{plant_stage_coefficients, PlantedStage, ReductionError};
use crate::C64;

/// Free choices behind a planted scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantSpec {
    /// c/d for stages 1, 2, 3; b/d is fixed to e₁, e₂, e₃.
    pub c_over_d: [C64; 3],
    pub anchor: Option<C64>,
    /// Seeds the random symmetric metric I + spread·R.
    pub metric_seed: u64,
    pub metric_spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedScenario {
    pub geometry: GeometryData,
    pub anchor: C64,
    /// Exact ratios as seeds, stages 1, 2, 3.
    pub stages: [StageConfig; 3],
    pub planted: [PlantedStage; 3],
    pub anchor_triple: [C64; 3],
    /// max |M v − b| of the minimum-norm solve.
    pub linear_residual: f64,
}

const UNKNOWNS: usize = 16;

fn sorted_triples() -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            for k in j..3 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn sorted_pairs() -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            out.push([i, j]);
        }
    }
    out
}

/// Symmetric T and S from 10 + 6 independent entries.
fn form_from(v: &[C64]) -> CubicForm {
    let mut t: Tensor3 = zero_tensor();
    let mut s: Mat3 = zero_mat();
    for (idx, [i, j, k]) in sorted_triples().into_iter().enumerate() {
        for [a, b, c] in [
            [i, j, k],
            [i, k, j],
            [j, i, k],
            [j, k, i],
            [k, i, j],
            [k, j, i],
        ] {
            t[a][b][c] = v[idx];
        }
    }
    for (idx, [i, j]) in sorted_pairs().into_iter().enumerate() {
        s[i][j] = v[10 + idx];
        s[j][i] = v[10 + idx];
    }
    CubicForm { t, s }
}

fn unit(j: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); UNKNOWNS];
    v[j] = C64::new(1.0, 0.0);
    v
}

/// Builds a geometry whose stage views at the anchor carry planted
/// coefficients with exactly solvable normalization constraints and whose
/// cubic vanishes on the diagonal.
///
/// The 16 independent entries of (T, S) solve 11 linear conditions in the
/// minimum-norm sense; then p = 1, Γ = g⁻¹T and R = −S for a random metric g.
pub fn plant(w: &Weierstrass, spec: &PlantSpec) -> Result<PlantedScenario, PipelineError> {
    let roots = w.half_period_roots()?;
    let anchor = spec.anchor.unwrap_or_else(|| default_anchor(w));
    let rho = w.wp(anchor)?;
    let zero = C64::new(0.0, 0.0);

    let mut rows: Vec<Vec<C64>> = Vec::new();
    let mut rhs: Vec<C64> = Vec::new();
    let basis: Vec<CubicForm> = (0..UNKNOWNS).map(|j| form_from(&unit(j))).collect();
    rows.push(basis.iter().map(|f| f.diagonal_sums().0).collect());
    rhs.push(zero);
    rows.push(basis.iter().map(|f| f.diagonal_sums().1).collect());
    rhs.push(zero);

    let mut x = [zero; 3];
    let mut planted = Vec::with_capacity(3);
    let mut stages = Vec::with_capacity(3);
    for axis in [Axis::X1, Axis::X2, Axis::X3] {
        let i = axis.index();
        let stage_err = |e: ReductionError| PipelineError::Stage {
            stage: axis.number(),
            source: StageError::Reduction(e),
        };
        let others: Vec<C64> = (0..3).filter(|&j| j != i).map(|j| roots[j]).collect();
        let ratios =
            RatioSet::from_unknowns(roots[i], spec.c_over_d[i]).map_err(|e| stage_err(e.into()))?;
        let candidates =
            plant_stage_coefficients(&ratios, [others[0], others[1]]).map_err(stage_err)?;
        let best = *candidates
            .first()
            .filter(|c| c.closure <= 1e-8 * (1.0 + c.shift.norm()))
            .ok_or_else(|| {
                PipelineError::InvalidStages(format!(
                    "no admissible planted coefficients for stage {}",
                    axis.number()
                ))
            })?;
        let fixed = match axis {
            Axis::X1 => [rho, rho],
            Axis::X2 => [x[0], rho],
            Axis::X3 => [x[0], x[1]],
        };
        let views: Vec<AxisView> = basis.iter().map(|f| axis_view(f, axis, fixed)).collect();
        rows.push(views.iter().map(|v| v.a).collect());
        rhs.push(best.a);
        rows.push(views.iter().map(|v| v.b).collect());
        rhs.push(best.b);
        rows.push(views.iter().map(|v| v.c).collect());
        rhs.push(best.c);
        let view = AxisView {
            axis,
            a: best.a,
            b: best.b,
            c: best.c,
            g: zero,
        };
        x[i] = isolated_root(&view, rho, Branch::Plus, anchor)?;
        planted.push(best);
        stages.push(StageConfig {
            axis,
            seed: Some([ratios.b_over_d, ratios.c_over_d]),
            branch: Branch::Plus,
        });
    }

    let m = DMatrix::from_fn(rows.len(), UNKNOWNS, |r, c| rows[r][c]);
    let b = DVector::from_vec(rhs.clone());
    let pinv = m
        .clone()
        .pseudo_inverse(1e-13)
        .map_err(|e| PipelineError::InvalidStages(e.to_owned()))?;
    let v = &pinv * &b;
    let linear_residual = (&m * &v - &b).iter().map(|r| r.norm()).fold(0.0, f64::max);
    let form = form_from(v.as_slice());

    let mut rng = ChaCha8Rng::seed_from_u64(spec.metric_seed);
    let mut g = Matrix3::<f64>::identity();
    for r in 0..3 {
        for c in r..3 {
            let e = spec.metric_spread * rng.random_range(-1.0..1.0);
            g[(r, c)] += e;
            if r != c {
                g[(c, r)] += e;
            }
        }
    }
    let ginv = g
        .try_inverse()
        .ok_or_else(|| PipelineError::InvalidStages("planted metric is singular".into()))?;
    let mut gamma = zero_tensor();
    for r in 0..3 {
        for i in 0..3 {
            for l in 0..3 {
                gamma[r][i][l] = (0..3).map(|k| form.t[i][l][k] * ginv[(r, k)]).sum();
            }
        }
    }
    let mut metric = zero_mat();
    let mut ricci = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            metric[i][j] = C64::new(g[(i, j)], 0.0);
            ricci[i][j] = -form.s[i][j];
        }
    }
    // Γ inherits exact symmetry from T; R from S
    let geometry = GeometryData::new(1.0, metric, gamma, ricci)
        .map_err(|e| PipelineError::InvalidStages(format!("planted geometry: {e}")))?;

    Ok(PlantedScenario {
        geometry,
        anchor,
        stages: [stages[0], stages[1], stages[2]],
        planted: [planted[0], planted[1], planted[2]],
        anchor_triple: x,
        linear_residual,
    })
}
