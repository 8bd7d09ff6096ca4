use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{DepressedForm, ReductionError};
use crate::ratios::RatioSet;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormalizationOptions {
    /// Bound on the scaled residual max |rᵢ|/(1 + |targetᵢ|).
    pub tol: f64,
    pub max_iter: usize,
    /// Relative central-difference step.
    pub fd_step: f64,
    /// Smallest accepted line-search fraction.
    pub min_step: f64,
    /// Singular values below this share of the largest count as zero.
    pub rank_tol: f64,
}

impl Default for NormalizationOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200,
            fd_step: 1e-6,
            min_step: 1.0 / (1u32 << 20) as f64,
            rank_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationReport {
    pub ratios: RatioSet,
    pub form: DepressedForm,
    pub target: [C64; 4],
    /// P̄ᵢ(0) − targetᵢ.
    pub residual: [C64; 4],
    /// max |rᵢ|/(1 + |targetᵢ|).
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Scaled residual after each accepted step, starting at the seed.
    pub history: Vec<f64>,
}

struct Point {
    x: [C64; 2],
    form: DepressedForm,
    scaled: [C64; 4],
    norm: f64,
}

/// Damped Gauss–Newton over the unknowns (b/d, c/d) driving the principal
/// parts P̄ᵢ(0) of `build` onto `target`.
///
/// A stationary point above tolerance is returned with `converged = false`;
/// running out of iterations is an error.
pub fn solve_normalization<F>(
    build: F,
    target: [C64; 4],
    seed: [C64; 2],
    options: &NormalizationOptions,
) -> Result<NormalizationReport, ReductionError>
where
    F: Fn(&RatioSet) -> Result<DepressedForm, ReductionError>,
{
    let weights = target.map(|t| 1.0 / (1.0 + t.norm()));
    let eval = |x: [C64; 2]| -> Result<Point, ReductionError> {
        let ratios = RatioSet::from_unknowns(x[0], x[1])?;
        let form = build(&ratios)?;
        let p = form.principal();
        let scaled = [0, 1, 2, 3].map(|i| (p[i] - target[i]) * weights[i]);
        if scaled.iter().any(|r| !r.is_finite()) {
            return Err(ReductionError::DivisionByZero("residual"));
        }
        let norm = scaled.iter().map(|r| r.norm()).fold(0.0, f64::max);
        Ok(Point {
            x,
            form,
            scaled,
            norm,
        })
    };

    let mut current = eval(seed)?;
    let mut history = vec![current.norm];
    let mut iterations = 0;
    let mut converged = current.norm <= options.tol;

    while !converged {
        if iterations == options.max_iter {
            return Err(ReductionError::NonConvergence {
                iterations,
                best_residual: current.norm,
            });
        }
        iterations += 1;

        let mut jac = DMatrix::<C64>::zeros(4, 2);
        for j in 0..2 {
            let h = options.fd_step * (1.0 + current.x[j].norm());
            let mut xp = current.x;
            let mut xm = current.x;
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (eval(xp)?, eval(xm)?);
            for i in 0..4 {
                jac[(i, j)] = (fp.scaled[i] - fm.scaled[i]) / (2.0 * h);
            }
        }
        let svd = jac.svd(true, true);
        let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if smin.is_nan() || smin <= options.rank_tol * smax {
            return Err(ReductionError::RankDeficient {
                singular_values: sv,
            });
        }
        let rhs = DVector::from_iterator(4, current.scaled.iter().map(|r| -r));
        let delta = svd.solve(&rhs, options.rank_tol * smax).map_err(|_| {
            ReductionError::RankDeficient {
                singular_values: sv.clone(),
            }
        })?;
        let step = [delta[0], delta[1]];

        let mut t = 1.0;
        let mut accepted = None;
        while t >= options.min_step {
            let trial = [current.x[0] + step[0] * t, current.x[1] + step[1] * t];
            if let Ok(p) = eval(trial) {
                if p.norm < current.norm {
                    accepted = Some(p);
                    break;
                }
            }
            t *= 0.5;
        }
        let Some(next) = accepted else { break };
        let moved = (next.x[0] - current.x[0]).norm() + (next.x[1] - current.x[1]).norm();
        let size = 1.0 + current.x[0].norm() + current.x[1].norm();
        current = next;
        history.push(current.norm);
        converged = current.norm <= options.tol;
        if moved <= 1e-15 * size {
            break;
        }
    }

    let principal = current.form.principal();
    Ok(NormalizationReport {
        ratios: current.form.ratios,
        residual: [0, 1, 2, 3].map(|i| principal[i] - target[i]),
        form: current.form,
        target,
        residual_norm: current.norm,
        iterations,
        converged,
        history,
    })
}

/// (4, 0, −g₂, −g₃).
pub fn principal_target(g2: C64, g3: C64) -> [C64; 4] {
    [C64::new(4.0, 0.0), C64::new(0.0, 0.0), -g2, -g3]
}
