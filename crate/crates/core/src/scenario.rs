//! Scenario files: versioned JSON input for every command.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{EllipticError, EllipticInvariants, PeriodLattice, Weierstrass};
use crate::geometry::{GeometryData, GeometryError, Mat3, Tensor3};
use crate::pipeline::{circle_loop, Route, SequenceOptions, StageConfig};
use crate::reduction::NormalizationOptions;
use crate::C64;

pub const SCENARIO_SCHEMA: &str = "weier-cubic/1";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("malformed scenario at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema {0:?}, expected {SCENARIO_SCHEMA:?}")]
    Schema(String),
    #[error("scenario has no geometry block")]
    MissingGeometry,
    #[error("elliptic block needs periods or invariants")]
    MissingElliptic,
    #[error("periods required for evaluation")]
    PeriodsRequired,
    #[error("loop {index}: {message}")]
    Loop { index: usize, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryBlock>,
    pub elliptic: EllipticBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub sample: SampleBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub p: f64,
    pub metric: Mat3,
    /// gamma[r][i][j] = Γ^r_ij.
    pub gamma: Tensor3,
    pub ricci: Mat3,
}

/// Periods take precedence when both are present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipticBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<[C64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<[C64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    /// Constraint residual a stage must reach.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<C64>,
    #[serde(default)]
    pub route: Route,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageConfig>,
}

fn default_tol() -> f64 {
    1e-8
}

fn default_max_iter() -> usize {
    200
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: default_max_iter(),
            anchor: None,
            route: Route::Derived,
            stages: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleBlock {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub z: Vec<C64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loops: Vec<LoopSpec>,
}

/// Either explicit points (closed: first = last) or a circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<C64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

impl LoopSpec {
    pub fn circle(center: C64, radius: f64, steps: usize) -> Self {
        Self {
            points: None,
            center: Some(center),
            radius: Some(radius),
            steps: Some(steps),
        }
    }

    pub fn path(&self, index: usize) -> Result<Vec<C64>, ScenarioError> {
        let err = |m: &str| ScenarioError::Loop {
            index,
            message: m.to_owned(),
        };
        match (&self.points, self.center, self.radius) {
            (Some(p), None, None) => Ok(p.clone()),
            (None, Some(c), Some(r)) if r > 0.0 => {
                Ok(circle_loop(c, r, self.steps.unwrap_or(400).max(8)))
            }
            (None, Some(_), Some(_)) => Err(err("radius must be positive")),
            _ => Err(err("give either points or center and radius")),
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if s.schema != SCENARIO_SCHEMA {
            return Err(ScenarioError::Schema(s.schema));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn geometry(&self) -> Result<GeometryData, ScenarioError> {
        let g = self
            .geometry
            .as_ref()
            .ok_or(ScenarioError::MissingGeometry)?;
        Ok(GeometryData::new(g.p, g.metric, g.gamma, g.ricci)?)
    }

    pub fn lattice(&self) -> Result<Option<PeriodLattice>, ScenarioError> {
        match self.elliptic.periods {
            Some([w1, w2]) => Ok(Some(PeriodLattice::new(w1, w2)?)),
            None => Ok(None),
        }
    }

    /// Evaluator for ℘; needs periods.
    pub fn weierstrass(&self) -> Result<Weierstrass, ScenarioError> {
        let lattice = self
            .lattice()?
            .ok_or(if self.elliptic.invariants.is_some() {
                ScenarioError::PeriodsRequired
            } else {
                ScenarioError::MissingElliptic
            })?;
        Ok(Weierstrass::new(lattice)?)
    }

    /// From the periods when present, else the given invariants.
    pub fn invariants(&self) -> Result<EllipticInvariants, ScenarioError> {
        if self.elliptic.periods.is_some() {
            return Ok(self.weierstrass()?.invariants());
        }
        let [g2, g3] = self
            .elliptic
            .invariants
            .ok_or(ScenarioError::MissingElliptic)?;
        Ok(EllipticInvariants::new(g2, g3)?)
    }

    pub fn sequence_options(&self) -> SequenceOptions {
        SequenceOptions {
            anchor: self.solver.anchor,
            stages: self.solver.stages.clone(),
            normalization: NormalizationOptions {
                max_iter: self.solver.max_iter,
                ..NormalizationOptions::default()
            },
            tolerance: self.solver.tol,
        }
    }
}
