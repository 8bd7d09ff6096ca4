//! Cubic-term elimination, square completion and the normalization solve.

mod depress;
mod normalize;
mod plant;

pub use depress::{default_m_samples, depress, DepressedForm};
pub use normalize::{
    principal_target, solve_normalization, NormalizationOptions, NormalizationReport,
};
pub use plant::{plant_stage_coefficients, PlantedStage};

pub use crate::poly::MobiusQuadruple;
pub use crate::ratios::RatioSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{printed_elimination_condition, AxisView};
use crate::poly::{leading_coefficient_n3, PolyError};
use crate::ratios::RatioError;
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("degenerate depression: {ratio} = {value}")]
    DegenerateDepression { ratio: &'static str, value: C64 },
    #[error("division by zero: {0} vanishes")]
    DivisionByZero(&'static str),
    #[error("depressed form is not cubic in m: degree-4 guard {guard:e}")]
    StructuralViolation { guard: f64 },
    #[error("Jacobian rank deficient, singular values {singular_values:?}")]
    RankDeficient { singular_values: Vec<f64> },
    #[error("no convergence after {iterations} iterations, best residual {best_residual:e}")]
    NonConvergence {
        iterations: usize,
        best_residual: f64,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<RatioError> for ReductionError {
    fn from(e: RatioError) -> Self {
        match e {
            RatioError::Degenerate { name, value } => {
                ReductionError::DegenerateDepression { ratio: name, value }
            }
        }
    }
}

/// Outcome of the cubic-term elimination for one view and quadruple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Elimination {
    /// n³ coefficient A a³ + B a²c + C ac² + G c³.
    pub residual: C64,
    /// |residual| / (|A a³| + |B a²c| + |C ac²| + |G c³|), zero for the zero form.
    pub relative: f64,
    /// G that kills the n³ coefficient: −(A a³ + B a²c + C ac²)/c³.
    pub derived_g: C64,
    /// G from the printed condition −a·Q/c³.
    pub printed_g: C64,
}

pub fn eliminate_cubic_term(
    view: &AxisView,
    quad: &MobiusQuadruple<C64>,
) -> Result<Elimination, ReductionError> {
    quad.check()?;
    if quad.c.norm() == 0.0 {
        return Err(ReductionError::DivisionByZero("c"));
    }
    let MobiusQuadruple { a, c, .. } = *quad;
    let residual = leading_coefficient_n3(view.coeffs(), quad);
    let terms = [
        view.a * a * a * a,
        view.b * a * a * c,
        view.c * a * c * c,
        view.g * c * c * c,
    ];
    let scale: f64 = terms.iter().map(|t| t.norm()).sum();
    let relative = if scale == 0.0 {
        0.0
    } else {
        residual.norm() / scale
    };
    let derived_g = -(terms[0] + terms[1] + terms[2]) / (c * c * c);
    Ok(Elimination {
        residual,
        relative,
        derived_g,
        printed_g: printed_elimination_condition(view, quad),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Axis;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn view(a: C64, b: C64, cc: C64, g: C64) -> AxisView {
        AxisView {
            axis: Axis::X3,
            a,
            b,
            c: cc,
            g,
        }
    }

    #[test]
    fn zero_form_has_zero_residual() {
        let z = c(0.0, 0.0);
        let q = MobiusQuadruple::new(c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0), c(3.0, 0.0)).unwrap();
        let e = eliminate_cubic_term(&view(z, z, z, z), &q).unwrap();
        assert_eq!(e.residual, z);
        assert_eq!(e.relative, 0.0);
    }

    #[test]
    fn a_zero_with_g_zero() {
        let q = MobiusQuadruple::new(c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        let v = view(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(0.0, 0.0));
        assert_eq!(eliminate_cubic_term(&v, &q).unwrap().residual, c(0.0, 0.0));
    }

    #[test]
    fn back_solved_g_closes() {
        let q = MobiusQuadruple::new(c(0.3, -1.2), c(0.5, 0.2), c(1.7, 0.4), c(-0.8, 0.0)).unwrap();
        let mut v = view(c(1.1, 0.3), c(-0.4, 2.0), c(0.9, -0.6), c(0.0, 0.0));
        v.g = eliminate_cubic_term(&v, &q).unwrap().derived_g;
        assert!(eliminate_cubic_term(&v, &q).unwrap().relative < 1e-15);
    }

    #[test]
    fn zero_c_is_a_division_error() {
        let q = MobiusQuadruple::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let v = view(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(
            eliminate_cubic_term(&v, &q),
            Err(ReductionError::DivisionByZero("c"))
        );
    }
}
