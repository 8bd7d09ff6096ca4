//! Geometric input and the cubic form it defines.

mod closed_forms;
mod cubic;
mod metric;
mod printed;

pub use closed_forms::{
    closed_form_coefficients, ClosedFormCoefficients, ClosedFormInputs, ClosedFormReport,
};
pub use cubic::{assemble_cubic, axis_view, symmetrize, AxisView, CubicForm};
pub use metric::{christoffel_ricci_from_metric, MetricGrid};
pub use printed::{
    k_coefficients, lowered, printed_elimination_condition, printed_stage1, printed_stage2,
    printed_stage3, printed_two_variable_equation, KCoefficients, PrintedStage1, PrintedStage2,
    PrintedStage3,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::C64;

pub type Mat3 = [[C64; 3]; 3];
/// Index order [r][i][j] for Γ^r_ij; [i][j][k] for the cubic tensor.
pub type Tensor3 = [[[C64; 3]; 3]; 3];

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{field} is not symmetric at [{i}][{j}]")]
    NotSymmetric {
        field: &'static str,
        i: usize,
        j: usize,
    },
    #[error("gamma^{r} is not symmetric at [{i}][{j}]")]
    GammaNotSymmetric { r: usize, i: usize, j: usize },
    #[error("{0} has a non-finite entry")]
    NonFinite(&'static str),
    #[error("p must be finite")]
    BadWeight,
    #[error("metric grid: {0}")]
    Grid(String),
    #[error("singular metric")]
    SingularMetric,
}

/// Differential selected as the cubic's variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    /// Zero-based index.
    pub fn index(self) -> usize {
        self as usize
    }

    /// One-based number, as in dX¹, dX², dX³.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Axis::X1),
            2 => Some(Axis::X2),
            3 => Some(Axis::X3),
            _ => None,
        }
    }

    /// The other two zero-based indices, increasing.
    pub fn others(self) -> [usize; 2] {
        match self {
            Axis::X1 => [1, 2],
            Axis::X2 => [0, 2],
            Axis::X3 => [0, 1],
        }
    }
}

impl TryFrom<u8> for Axis {
    type Error = String;
    fn try_from(n: u8) -> Result<Self, String> {
        Axis::from_number(n).ok_or_else(|| format!("axis must be 1, 2 or 3, got {n}"))
    }
}

impl From<Axis> for u8 {
    fn from(a: Axis) -> u8 {
        a.number()
    }
}

/// g_ij, Γ^r_ij, R_ij and the weight p at one point, dimension 3.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryData {
    p: f64,
    metric: Mat3,
    gamma: Tensor3,
    ricci: Mat3,
}

impl GeometryData {
    pub fn new(p: f64, metric: Mat3, gamma: Tensor3, ricci: Mat3) -> Result<Self, GeometryError> {
        if !p.is_finite() {
            return Err(GeometryError::BadWeight);
        }
        check_symmetric("metric", &metric)?;
        check_symmetric("ricci", &ricci)?;
        for (r, g) in gamma.iter().enumerate() {
            check_symmetric("gamma", g).map_err(|e| match e {
                GeometryError::NotSymmetric { i, j, .. } => {
                    GeometryError::GammaNotSymmetric { r, i, j }
                }
                other => other,
            })?;
        }
        Ok(Self {
            p,
            metric,
            gamma,
            ricci,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn metric(&self) -> &Mat3 {
        &self.metric
    }

    pub fn gamma(&self) -> &Tensor3 {
        &self.gamma
    }

    pub fn ricci(&self) -> &Mat3 {
        &self.ricci
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        let m = self.metric.iter().chain(self.ricci.iter()).flatten();
        let g = self.gamma.iter().flatten().flatten();
        m.chain(g).all(|z| z.im == 0.0)
    }
}

fn check_symmetric(field: &'static str, m: &Mat3) -> Result<(), GeometryError> {
    if m.iter().flatten().any(|z| !z.is_finite()) {
        return Err(GeometryError::NonFinite(field));
    }
    let scale = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..3 {
        for j in 0..i {
            if (m[i][j] - m[j][i]).norm() > SYMMETRY_TOL * scale {
                return Err(GeometryError::NotSymmetric { field, i, j });
            }
        }
    }
    Ok(())
}

pub fn zero_mat() -> Mat3 {
    [[C64::new(0.0, 0.0); 3]; 3]
}

pub fn identity_mat() -> Mat3 {
    let mut m = zero_mat();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

pub fn zero_tensor() -> Tensor3 {
    [zero_mat(); 3]
}
