//! Machine-readable reports for each command.
//!
//! Everything here is a pure function of the scenario and the explicit
//! overrides, so identical inputs serialize to identical bytes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audit::AuditStatus;
use crate::elliptic::{eisenstein_invariants, EllipticError, PeriodLattice, Weierstrass};
use crate::geometry::{assemble_cubic, lowered, Axis, AxisView, Mat3, Tensor3};
use crate::pipeline::{
    evaluate_triple, formula_audit, locate_radicand_zeros, monodromy_check, plant, run_sequence,
    stage_radicand, AuditReport, Branch, MonodromyReport, PipelineError, PlantSpec, Route,
    SequencePlan, SolutionTriple, StageConfig,
};
use crate::poly::DensePoly;
use crate::ratios::RatioSet;
use crate::reduction::Elimination;
use crate::scenario::{
    EllipticBlock, GeometryBlock, LoopSpec, SampleBlock, Scenario, ScenarioError, SolverBlock,
    SCENARIO_SCHEMA,
};
use crate::C64;

pub const REPORT_SCHEMA: &str = "weier-cubic-report/1";
/// Bound on the relative cubic residual of a solution triple.
pub const TRIPLE_TOL: f64 = 1e-6;
/// Bound on the ℘ control difference around a loop.
pub const CONTROL_TOL: f64 = 1e-9;
/// dX¹ change that counts as a monodromy witness.
pub const WITNESS_TOL: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Overrides from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub cutoff: Option<usize>,
    /// Replaces the scenario's solver stages.
    pub stages: Option<Vec<StageConfig>>,
}

impl Overrides {
    fn apply(&self, scenario: &Scenario) -> Scenario {
        let mut s = scenario.clone();
        if let Some(t) = self.tol {
            s.solver.tol = t;
        }
        if let Some(st) = &self.stages {
            s.solver.stages = st.clone();
        }
        s
    }
}

/// How a command finished, mapped to the process exit code by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ok,
    AboveTolerance,
    NoBranchPoints,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WpRow {
    pub z: C64,
    pub wp: C64,
    pub wp_prime: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EisensteinRow {
    pub cutoff: usize,
    pub g2: C64,
    pub g3: C64,
    /// |g(cutoff) − g(cutoff/2)|.
    pub g2_estimate: f64,
    pub g3_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticReport {
    pub schema: String,
    pub command: String,
    /// "periods" or "invariants".
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periods: Option<[C64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<C64>,
    pub g2: C64,
    pub g3: C64,
    pub discriminant: C64,
    /// e₁, e₂, e₃ at ω₁/2, (ω₁+ω₂)/2, ω₂/2; roots of 4x³ − g₂x − g₃ by
    /// increasing real part when only invariants are given.
    pub roots: [C64; 3],
    pub tol: f64,
    pub g2_below_tol: bool,
    pub g3_below_tol: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eisenstein: Option<EisensteinRow>,
    pub values: Vec<WpRow>,
}

pub fn elliptic_report(
    scenario: &Scenario,
    overrides: &Overrides,
) -> Result<EllipticReport, CommandError> {
    let s = overrides.apply(scenario);
    let tol = s.solver.tol;
    let lattice = s.lattice()?;
    let inv = s.invariants()?;
    let (source, roots, values, eisenstein) = match &lattice {
        Some(l) => {
            let w = Weierstrass::new(*l)?;
            let values = s
                .sample
                .z
                .iter()
                .map(|&z| w.wp_pair(z).map(|(wp, wp_prime)| WpRow { z, wp, wp_prime }))
                .collect::<Result<Vec<_>, _>>()?;
            let eis = match overrides.cutoff {
                Some(n) => {
                    let e = eisenstein_invariants(l, n)?;
                    Some(EisensteinRow {
                        cutoff: n,
                        g2: e.invariants.g2,
                        g3: e.invariants.g3,
                        g2_estimate: e.g2_estimate,
                        g3_estimate: e.g3_estimate,
                    })
                }
                None => None,
            };
            ("periods", w.half_period_roots()?, values, eis)
        }
        None => {
            if !s.sample.z.is_empty() || overrides.cutoff.is_some() {
                return Err(ScenarioError::PeriodsRequired.into());
            }
            let cubic = DensePoly::new(vec![
                -inv.g3,
                -inv.g2,
                C64::new(0.0, 0.0),
                C64::new(4.0, 0.0),
            ])
            .expect("cubic");
            let mut r = cubic
                .roots()
                .map_err(|_| EllipticError::Accuracy { bound: f64::NAN })?;
            r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            ("invariants", [r[0], r[1], r[2]], Vec::new(), None)
        }
    };
    Ok(EllipticReport {
        schema: REPORT_SCHEMA.into(),
        command: "elliptic".into(),
        source: source.into(),
        periods: lattice.map(|l| [l.omega1(), l.omega2()]),
        tau: lattice.map(|l| l.tau()),
        g2: inv.g2,
        g3: inv.g3,
        discriminant: inv.discriminant(),
        roots,
        tol,
        g2_below_tol: inv.g2.norm() < tol,
        g3_below_tol: inv.g3.norm() < tol,
        eisenstein,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadingRow {
    pub axis: Axis,
    /// T_aaa of the assembled form.
    pub derived: C64,
    /// 2p Γ^r_aa g_ar as printed.
    pub printed: C64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractReport {
    pub schema: String,
    pub command: String,
    pub p: f64,
    pub real_geometry: bool,
    pub cubic_t: Tensor3,
    pub cubic_s: Mat3,
    /// (ΣT, ΣS).
    pub diagonal_sums: [C64; 2],
    pub leading: Vec<LeadingRow>,
}

pub fn extract_report(scenario: &Scenario) -> Result<ExtractReport, CommandError> {
    let geom = scenario.geometry()?;
    let cubic = assemble_cubic(&geom);
    let (dt, ds) = cubic.diagonal_sums();
    let leading = Axis::ALL
        .iter()
        .map(|&axis| {
            let a = axis.index();
            LeadingRow {
                axis,
                derived: cubic.t[a][a][a],
                printed: 2.0 * geom.p() * lowered(&geom, a, a, a),
            }
        })
        .collect();
    Ok(ExtractReport {
        schema: REPORT_SCHEMA.into(),
        command: "extract".into(),
        p: geom.p(),
        real_geometry: geom.is_real(),
        cubic_t: cubic.t,
        cubic_s: cubic.s,
        diagonal_sums: [dt, ds],
        leading,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub axis: Axis,
    pub seed: [C64; 2],
    pub branch: Branch,
    pub fixed: [C64; 2],
    pub view: AxisView,
    pub ratios: RatioSet,
    pub k: C64,
    pub l1: C64,
    pub l2: C64,
    pub lambda: C64,
    pub sqrt_k: C64,
    pub sqrt_c: C64,
    /// P̄ᵢ(0), i = 1..4.
    pub principal: [C64; 4],
    pub target: [C64; 4],
    /// ñ and ñ² coefficients of each P̄ᵢ.
    pub additional: [[C64; 2]; 4],
    pub constraint_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub history: Vec<f64>,
    pub elimination: Elimination,
    pub certificate: f64,
    pub guard: f64,
    pub identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleRow {
    pub index: usize,
    pub z: C64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<SolutionTriple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub outcome: Outcome,
    pub route: Route,
    pub tolerance: f64,
    pub g2: C64,
    pub g3: C64,
    pub anchor: C64,
    pub anchor_rho: C64,
    pub anchor_triple: [C64; 3],
    pub diagonal_sums: [C64; 2],
    /// Axes 3, 2, 1 in that order.
    pub stages: Vec<StageReport>,
    pub max_constraint_residual: f64,
    pub triples: Vec<TripleRow>,
    /// Largest relative residual over the rows that evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_relative_residual: Option<f64>,
    pub audit: AuditReport,
}

fn stage_report(plan: &SequencePlan) -> Vec<StageReport> {
    plan.stages
        .iter()
        .map(|s| {
            let n = &s.normalization;
            let f = &n.form;
            StageReport {
                axis: s.axis,
                seed: s.seed,
                branch: s.branch,
                fixed: s.fixed,
                view: s.view,
                ratios: n.ratios,
                k: f.k,
                l1: f.l1,
                l2: f.l2,
                lambda: f.lambda,
                sqrt_k: s.sqrt_k,
                sqrt_c: s.sqrt_c,
                principal: f.principal(),
                target: n.target,
                additional: f.additional(),
                constraint_residual: n.residual_norm,
                iterations: n.iterations,
                converged: n.converged,
                history: n.history.clone(),
                elimination: s.elimination,
                certificate: s.certificate,
                guard: f.guard,
                identity_residual: f.identity_residual,
            }
        })
        .collect()
}

/// Eight fixed points of the fundamental cell, used when a scenario lists none.
fn default_samples(lattice: &PeriodLattice) -> Vec<C64> {
    (0..8)
        .map(|j| {
            let t = j as f64;
            lattice.point(0.11 + 0.1 * t, 0.83 - 0.09 * t)
        })
        .collect()
}

pub(crate) struct Solved {
    pub scenario: Scenario,
    pub w: Weierstrass,
    pub plan: SequencePlan,
}

pub(crate) fn solve(scenario: &Scenario, overrides: &Overrides) -> Result<Solved, CommandError> {
    let s = overrides.apply(scenario);
    let geom = s.geometry()?;
    let w = s.weierstrass()?;
    let plan = run_sequence(&geom, &w, &s.sequence_options())?;
    Ok(Solved {
        scenario: s,
        w,
        plan,
    })
}

pub fn solve_report(scenario: &Scenario, overrides: &Overrides) -> Result<RunReport, CommandError> {
    let Solved {
        scenario: s,
        w,
        plan,
    } = solve(scenario, overrides)?;
    let route = s.solver.route;
    let zs = if s.sample.z.is_empty() {
        default_samples(w.lattice())
    } else {
        s.sample.z.clone()
    };
    let triples: Vec<TripleRow> = zs
        .iter()
        .enumerate()
        .map(
            |(index, &z)| match evaluate_triple(&plan, &w, z, route, None) {
                Ok(t) => TripleRow {
                    index,
                    z,
                    triple: Some(t),
                    error: None,
                },
                Err(e) => TripleRow {
                    index,
                    z,
                    triple: None,
                    error: Some(e.to_string()),
                },
            },
        )
        .collect();
    let max_relative_residual = triples
        .iter()
        .filter_map(|r| r.triple.map(|t| t.relative_residual))
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        });
    let audit = formula_audit(&plan, &w, plan.anchor)?;
    let inv = w.invariants();
    let (dt, ds) = plan.diagonal_sums;
    Ok(RunReport {
        schema: REPORT_SCHEMA.into(),
        command: "solve".into(),
        outcome: if plan.converged() {
            Outcome::Ok
        } else {
            Outcome::AboveTolerance
        },
        route,
        tolerance: plan.tolerance,
        g2: inv.g2,
        g3: inv.g3,
        anchor: plan.anchor,
        anchor_rho: plan.anchor_rho,
        anchor_triple: plan.anchor_triple,
        diagonal_sums: [dt, ds],
        stages: stage_report(&plan),
        max_constraint_residual: plan.max_constraint_residual(),
        triples,
        max_relative_residual,
        audit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub command: String,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
}

/// Solves, then checks every stage and sample row against fixed bounds.
pub fn verify_report(
    scenario: &Scenario,
    overrides: &Overrides,
) -> Result<VerifyReport, CommandError> {
    let run = solve_report(scenario, overrides)?;
    let mut checks = Vec::new();
    for st in &run.stages {
        let n = st.axis.number();
        checks.push(Check::new(
            format!("stage {n} constraint residual"),
            st.constraint_residual,
            run.tolerance,
        ));
        checks.push(Check::new(
            format!("stage {n} parametrization certificate"),
            st.certificate,
            run.tolerance,
        ));
        checks.push(Check::new(
            format!("stage {n} cubic-term elimination"),
            st.elimination.relative,
            run.tolerance,
        ));
        checks.push(Check::new(
            format!("stage {n} square completion"),
            st.identity_residual,
            1e-9,
        ));
    }
    let failed_rows = run.triples.iter().filter(|r| r.triple.is_none()).count();
    checks.push(Check::new(
        "sample rows without a solution",
        failed_rows as f64,
        0.0,
    ));
    checks.push(Check::new(
        "max relative cubic residual",
        run.max_relative_residual.unwrap_or(f64::INFINITY),
        TRIPLE_TOL,
    ));
    let missing = crate::pipeline::REQUIRED_FORMULAS
        .iter()
        .filter(|eq| !run.audit.rows.iter().any(|r| r.formula == **eq))
        .count();
    checks.push(Check::new("audit formulas missing", missing as f64, 0.0));
    let outcome = if checks.iter().all(|c| c.pass) {
        Outcome::Ok
    } else {
        Outcome::AboveTolerance
    };
    Ok(VerifyReport {
        schema: REPORT_SCHEMA.into(),
        command: "verify".into(),
        outcome,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub z: C64,
    pub rho: C64,
    pub radicand_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopRow {
    pub index: usize,
    /// "scenario" or "zero".
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<MonodromyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyCommandReport {
    pub schema: String,
    pub command: String,
    pub outcome: Outcome,
    pub route: Route,
    /// Stage-1 radicand coefficients in ρ, constant first.
    pub radicand: Vec<C64>,
    pub zeros: Vec<ZeroRow>,
    pub loops: Vec<LoopRow>,
    /// Every completed loop returned ℘, ℘′ within the control tolerance.
    pub control_ok: bool,
    /// Some loop moved dX¹ by more than the witness tolerance.
    pub witnessed: bool,
}

/// Loops from the scenario plus one circle around each radicand zero.
pub fn monodromy_report(
    scenario: &Scenario,
    overrides: &Overrides,
) -> Result<MonodromyCommandReport, CommandError> {
    let Solved {
        scenario: s,
        w,
        plan,
    } = solve(scenario, overrides)?;
    let route = s.solver.route;
    let mut paths = Vec::new();
    for (i, spec) in s.sample.loops.iter().enumerate() {
        let path = spec.path(i)?;
        let gap = (path[0] - path[path.len() - 1]).norm();
        if path.len() < 3 {
            return Err(PipelineError::ShortLoop.into());
        }
        if gap > 1e-12 * (1.0 + path[0].norm()) {
            return Err(PipelineError::OpenLoop { gap }.into());
        }
        paths.push(("scenario", None, path));
    }

    let radicand = stage_radicand(&plan, route);
    let zeros = locate_radicand_zeros(&radicand, &w)?;
    let lattice = w.lattice();
    for (i, &z0) in zeros.iter().enumerate() {
        let mut gap = 0.05 * lattice.min_norm();
        for (j, &z1) in zeros.iter().enumerate() {
            if i != j {
                gap = gap.min(0.25 * lattice.distance_to_lattice(z1 - z0));
            }
        }
        gap = gap.min(0.25 * lattice.distance_to_lattice(z0));
        paths.push(("zero", Some(z0), LoopSpec::circle(z0, gap, 400).path(0)?));
    }

    let loops: Vec<LoopRow> = paths
        .into_iter()
        .enumerate()
        .map(
            |(index, (source, center, path))| match monodromy_check(&plan, &w, route, &path) {
                Ok(r) => LoopRow {
                    index,
                    source: source.into(),
                    center,
                    report: Some(r),
                    error: None,
                },
                Err(e) => LoopRow {
                    index,
                    source: source.into(),
                    center,
                    report: None,
                    error: Some(e.to_string()),
                },
            },
        )
        .collect();
    let done = loops.iter().filter_map(|l| l.report.as_ref());
    let control_ok = done.clone().all(|r| r.wp_difference < CONTROL_TOL);
    let witnessed = done.clone().any(|r| r.dx1_relative > WITNESS_TOL);
    let zero_rows = zeros
        .iter()
        .map(|&z| {
            let rho = w.wp(z)?;
            Ok(ZeroRow {
                z,
                rho,
                radicand_abs: radicand.eval(rho).norm(),
            })
        })
        .collect::<Result<Vec<_>, EllipticError>>()?;
    Ok(MonodromyCommandReport {
        schema: REPORT_SCHEMA.into(),
        command: "monodromy".into(),
        outcome: if zeros.is_empty() {
            Outcome::NoBranchPoints
        } else {
            Outcome::Ok
        },
        route,
        radicand: radicand.coeffs().to_vec(),
        zeros: zero_rows,
        loops,
        control_ok,
        witnessed,
    })
}

/// Inputs of [`plant_scenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct PlantRequest {
    pub periods: [C64; 2],
    pub spec: PlantSpec,
    /// Relative perturbation applied to the exact seeds.
    pub perturb: f64,
    pub samples: usize,
    pub sample_seed: u64,
}

/// A complete scenario whose solution is known by construction.
pub fn plant_scenario(req: &PlantRequest) -> Result<Scenario, CommandError> {
    let lattice = PeriodLattice::new(req.periods[0], req.periods[1])?;
    let w = Weierstrass::new(lattice)?;
    let planted = plant(&w, &req.spec)?;
    let geom = &planted.geometry;
    let stages = planted
        .stages
        .iter()
        .map(|st| {
            let [bd, cd] = st.seed.expect("planted seeds");
            StageConfig {
                seed: Some([bd * (1.0 + req.perturb), cd * C64::new(1.0, req.perturb)]),
                ..*st
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(req.sample_seed);
    let z = (0..req.samples)
        .map(|_| lattice.point(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95)))
        .collect();
    Ok(Scenario {
        schema: SCENARIO_SCHEMA.into(),
        geometry: Some(GeometryBlock {
            p: geom.p(),
            metric: *geom.metric(),
            gamma: *geom.gamma(),
            ricci: *geom.ricci(),
        }),
        elliptic: EllipticBlock {
            periods: Some(req.periods),
            invariants: None,
        },
        solver: SolverBlock {
            anchor: Some(planted.anchor),
            stages,
            ..SolverBlock::default()
        },
        sample: SampleBlock {
            z,
            loops: Vec::new(),
        },
    })
}

/// Rows of the audit grouped by status, for summaries.
pub fn audit_counts(audit: &AuditReport) -> [(AuditStatus, usize); 3] {
    [
        (AuditStatus::Match, audit.matched),
        (AuditStatus::Flagged, audit.flagged),
        (AuditStatus::Unprinted, audit.unprinted),
    ]
}
