//! The three-stage cascade dX³ → dX² → dX¹: stage planning at an anchor
//! point, evaluation of the solution triple, monodromy and formula audit.

mod audit;
mod evaluate;
mod monodromy;
mod planted;

pub use audit::{formula_audit, AuditReport, REQUIRED_FORMULAS};
pub use evaluate::{evaluate_triple, stage_radicand, BranchTracker, Route, SolutionTriple};
pub use monodromy::{circle_loop, locate_radicand_zeros, monodromy_check, MonodromyReport};
pub use planted::{plant, PlantSpec, PlantedScenario};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{EllipticError, Weierstrass};
use crate::geometry::{assemble_cubic, axis_view, Axis, AxisView, CubicForm, GeometryData};
use crate::poly::MobiusQuadruple;
use crate::reduction::{
    default_m_samples, depress, eliminate_cubic_term, principal_target, solve_normalization,
    Elimination, NormalizationOptions, NormalizationReport, ReductionError,
};
use crate::C64;

/// Relative size below which a leading coefficient counts as zero.
const DEGENERATE_TOL: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StageError {
    #[error("degenerate cubic: leading coefficient {a} vanishes, the a/c ratio is unconstrained")]
    DegenerateCubic { a: C64 },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("stage {stage}: {source}")]
    Stage { stage: u8, source: StageError },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error("stage {stage}: solution has a pole at z = {z}")]
    PoleOfSolution { stage: u8, z: C64 },
    #[error("stage {stage}: radicand vanishes at z = {z}; use path-tracked evaluation")]
    BranchAmbiguity { stage: u8, z: C64 },
    #[error("stage {stage}: square root jumped by 90 degrees or more at loop point {index}; refine the loop")]
    TrackingStep { stage: u8, index: usize },
    #[error("loop is not closed: first and last points differ by {gap:e}")]
    OpenLoop { gap: f64 },
    #[error("loop needs at least 3 points")]
    ShortLoop,
    #[error("invalid stage configuration: {0}")]
    InvalidStages(String),
}

/// Sign applied to the principal square root of a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl TryFrom<i8> for Branch {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, String> {
        match v {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            other => Err(format!("branch must be 1 or -1, got {other}")),
        }
    }
}

impl From<Branch> for i8 {
    fn from(b: Branch) -> i8 {
        b.sign() as i8
    }
}

/// Solver input for one stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub axis: Axis,
    /// Starting (b/d, c/d); defaults to (e_axis, 1).
    #[serde(default)]
    pub seed: Option<[C64; 2]>,
    #[serde(default)]
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceOptions {
    /// Point where stage coefficients are frozen; defaults to 0.29ω₁ + 0.17ω₂.
    pub anchor: Option<C64>,
    /// Any order, each axis at most once; missing axes use defaults.
    pub stages: Vec<StageConfig>,
    pub normalization: NormalizationOptions,
    /// Constraint residual a stage must reach to count as solved.
    pub tolerance: f64,
}

impl Default for SequenceOptions {
    fn default() -> Self {
        Self {
            anchor: None,
            stages: Vec::new(),
            normalization: NormalizationOptions::default(),
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StagePlan {
    pub axis: Axis,
    pub seed: [C64; 2],
    pub branch: Branch,
    /// The other two differentials at the anchor, increasing axis order.
    pub fixed: [C64; 2],
    pub view: AxisView,
    /// n³ coefficient with a/c = ρ(anchor) and the solved ratios.
    pub elimination: Elimination,
    pub normalization: NormalizationReport,
    /// Principal √k and √C at the anchor.
    pub sqrt_k: C64,
    pub sqrt_c: C64,
    /// |ρ′² − Σ P̄ᵢ(0) ρ^(3−i)| / (1 + |ρ′|² + Σ |P̄ᵢ(0)||ρ|^(3−i)) at the anchor.
    pub certificate: f64,
}

impl StagePlan {
    pub fn ratios(&self) -> &crate::ratios::RatioSet {
        &self.normalization.ratios
    }

    pub fn constraint_residual(&self) -> f64 {
        self.normalization.residual_norm
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequencePlan {
    pub geometry: GeometryData,
    pub cubic: CubicForm,
    pub anchor: C64,
    pub anchor_rho: C64,
    pub anchor_triple: [C64; 3],
    /// (ΣT, ΣS); both zero makes the cascade close exactly.
    pub diagonal_sums: (C64, C64),
    /// Stage plans for axes 3, 2, 1 in that order.
    pub stages: Vec<StagePlan>,
    pub tolerance: f64,
}

impl SequencePlan {
    pub fn stage(&self, axis: Axis) -> &StagePlan {
        self.stages
            .iter()
            .find(|s| s.axis == axis)
            .expect("every axis is planned")
    }

    /// Every stage's constraint residual is within tolerance.
    pub fn converged(&self) -> bool {
        self.stages
            .iter()
            .all(|s| s.constraint_residual() <= self.tolerance)
    }

    pub fn max_constraint_residual(&self) -> f64 {
        self.stages
            .iter()
            .map(|s| s.constraint_residual())
            .fold(0.0, f64::max)
    }
}

pub fn default_anchor(w: &Weierstrass) -> C64 {
    w.lattice().point(0.29, 0.17)
}

fn resolve_stages(
    configs: &[StageConfig],
    roots: &[C64; 3],
) -> Result<[StageConfig; 3], PipelineError> {
    let mut out: [Option<StageConfig>; 3] = [None; 3];
    for cfg in configs {
        let slot = &mut out[cfg.axis.index()];
        if slot.is_some() {
            return Err(PipelineError::InvalidStages(format!(
                "axis {} listed twice",
                cfg.axis.number()
            )));
        }
        *slot = Some(*cfg);
    }
    Ok([Axis::X1, Axis::X2, Axis::X3].map(|axis| {
        let mut cfg = out[axis.index()].unwrap_or(StageConfig {
            axis,
            seed: None,
            branch: Branch::Plus,
        });
        cfg.seed
            .get_or_insert([roots[axis.index()], C64::new(1.0, 0.0)]);
        cfg
    }))
}

/// Freezes each stage's axis view at the anchor, then runs the elimination
/// and the normalization solve for stages 3, 2, 1.
///
/// Stage 1 is viewed at (ρ, ρ), stage 2 at (dX¹, ρ), stage 3 at (dX¹, dX²),
/// with ρ = ℘(anchor) and the dX values from the derived evaluation route.
pub fn run_sequence(
    geom: &GeometryData,
    w: &Weierstrass,
    options: &SequenceOptions,
) -> Result<SequencePlan, PipelineError> {
    let cubic = assemble_cubic(geom);
    for axis in [Axis::X3, Axis::X2, Axis::X1] {
        let i = axis.index();
        let a = cubic.t[i][i][i];
        let scale = cubic
            .t
            .iter()
            .flatten()
            .flatten()
            .chain(cubic.s.iter().flatten())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if a.norm() <= DEGENERATE_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(PipelineError::Stage {
                stage: axis.number(),
                source: StageError::DegenerateCubic { a },
            });
        }
    }

    let roots = w.half_period_roots()?;
    let configs = resolve_stages(&options.stages, &roots)?;
    let anchor = options.anchor.unwrap_or_else(|| default_anchor(w));
    let (rho, rho_p) = w.wp_pair(anchor)?;
    let branches = configs.map(|c| c.branch);
    let triple = evaluate::derived_triple(&cubic, rho, &branches, anchor, None)?;
    let x = triple.values;

    let inv = w.invariants();
    let target = principal_target(inv.g2, inv.g3);
    let mut stages = Vec::with_capacity(3);
    for axis in [Axis::X3, Axis::X2, Axis::X1] {
        let cfg = configs[axis.index()];
        let fixed = match axis {
            Axis::X1 => [rho, rho],
            Axis::X2 => [x[0], rho],
            Axis::X3 => [x[0], x[1]],
        };
        let view = axis_view(&cubic, axis, fixed);
        let stage_err = |e: ReductionError| PipelineError::Stage {
            stage: axis.number(),
            source: e.into(),
        };
        let seed = cfg.seed.expect("resolved");
        let build = |r: &crate::ratios::RatioSet| depress(&view, r, &default_m_samples(r.b_over_d));
        let normalization =
            solve_normalization(build, target, seed, &options.normalization).map_err(stage_err)?;
        let r = normalization.ratios;
        let one = C64::new(1.0, 0.0);
        let quad = MobiusQuadruple::new(rho * r.c_over_d, r.b_over_d, r.c_over_d, one)
            .map_err(|e| stage_err(e.into()))?;
        let elimination = eliminate_cubic_term(&view, &quad).map_err(stage_err)?;
        let principal = normalization.form.principal();
        let mut rhs = C64::new(0.0, 0.0);
        let mut size = 1.0 + rho_p.norm_sqr();
        for (i, p) in principal.iter().enumerate() {
            let term = p * rho.powi(3 - i as i32);
            rhs += term;
            size += term.norm();
        }
        let certificate = (rho_p * rho_p - rhs).norm() / size;
        stages.push(StagePlan {
            axis,
            seed,
            branch: cfg.branch,
            fixed,
            view,
            elimination,
            sqrt_k: normalization.form.k.sqrt(),
            sqrt_c: view.c.sqrt(),
            normalization,
            certificate,
        });
    }

    Ok(SequencePlan {
        geometry: geom.clone(),
        diagonal_sums: cubic.diagonal_sums(),
        cubic,
        anchor,
        anchor_rho: rho,
        anchor_triple: x,
        stages,
        tolerance: options.tolerance,
    })
}
