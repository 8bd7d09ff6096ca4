use serde::{Deserialize, Serialize};

use super::{evaluate_triple, BranchTracker, PipelineError, Route, SequencePlan};
use crate::elliptic::Weierstrass;
use crate::poly::DensePoly;
use crate::C64;

/// Relative dX¹ change below which a loop counts as trivial.
pub const TRIVIAL_TOL: f64 = 1e-8;
const NEWTON_ITERS: usize = 100;
const GRID: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub route: Route,
    pub points: usize,
    pub start: [C64; 3],
    pub end: [C64; 3],
    pub difference: [C64; 3],
    /// |Δ dX¹| / (1 + |dX¹(start)|).
    pub dx1_relative: f64,
    /// Whether each stage's tracked square root came back negated.
    pub sign_flips: [bool; 3],
    pub wp_start: C64,
    pub wp_end: C64,
    /// |℘(end) − ℘(start)| + |℘′(end) − ℘′(start)|.
    pub wp_difference: f64,
    pub trivial: bool,
}

/// n + 1 points on a circle, the last equal to the first.
pub fn circle_loop(center: C64, radius: f64, n: usize) -> Vec<C64> {
    let mut pts: Vec<C64> = (0..n)
        .map(|j| center + C64::from_polar(radius, std::f64::consts::TAU * j as f64 / n as f64))
        .collect();
    pts.push(pts[0]);
    pts
}

/// Continues the triple along a closed polyline, carrying every square root
/// by continuity, and compares the start and end values.
pub fn monodromy_check(
    plan: &SequencePlan,
    w: &Weierstrass,
    route: Route,
    path: &[C64],
) -> Result<MonodromyReport, PipelineError> {
    if path.len() < 3 {
        return Err(PipelineError::ShortLoop);
    }
    let (first, last) = (path[0], path[path.len() - 1]);
    let gap = (first - last).norm();
    if gap > 1e-12 * (1.0 + first.norm()) {
        return Err(PipelineError::OpenLoop { gap });
    }
    let mut tracker = BranchTracker::new();
    let start = evaluate_triple(plan, w, first, route, Some(&mut tracker))?;
    let mut end = start;
    for &z in &path[1..] {
        end = evaluate_triple(plan, w, z, route, Some(&mut tracker))?;
    }
    let difference = [0, 1, 2].map(|i| end.dx[i] - start.dx[i]);
    let sign_flips = [0, 1, 2]
        .map(|i| (end.roots[i] + start.roots[i]).norm() < (end.roots[i] - start.roots[i]).norm());
    let dx1_relative = difference[0].norm() / (1.0 + start.dx[0].norm());
    let (wp_start, wpp_start) = w.wp_pair(first)?;
    let (wp_end, wpp_end) = w.wp_pair(last)?;
    Ok(MonodromyReport {
        route,
        points: path.len(),
        start: start.dx,
        end: end.dx,
        difference,
        dx1_relative,
        sign_flips,
        wp_start,
        wp_end,
        wp_difference: (wp_end - wp_start).norm() + (wpp_end - wpp_start).norm(),
        trivial: dx1_relative <= TRIVIAL_TOL,
    })
}

/// Points of the fundamental parallelogram where the radicand, a polynomial
/// in ρ, vanishes at ρ = ℘(z).
///
/// Roots in ρ are exact; ℘(z) = root is inverted by Newton from a 12×12
/// seed grid and deduplicated modulo the lattice. Sorted by lattice
/// coordinates.
pub fn locate_radicand_zeros(
    radicand: &DensePoly<C64>,
    w: &Weierstrass,
) -> Result<Vec<C64>, PipelineError> {
    if radicand.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let lattice = w.lattice();
    let tiny = 1e-7 * lattice.min_norm();
    let size = |rho: C64| {
        radicand
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * rho.norm().powi(k as i32))
            .sum::<f64>()
    };
    let mut found: Vec<C64> = Vec::new();
    let roots = radicand
        .roots()
        .map_err(|_| PipelineError::InvalidStages("radicand root finding failed".into()))?;
    for r in roots {
        for i in 0..GRID {
            for j in 0..GRID {
                let mut z = lattice.point(
                    (i as f64 + 0.5) / GRID as f64,
                    (j as f64 + 0.5) / GRID as f64,
                );
                for _ in 0..NEWTON_ITERS {
                    let Ok((p, dp)) = w.wp_pair(z) else { break };
                    let step = (p - r) / dp;
                    if !step.is_finite() {
                        break;
                    }
                    z -= step;
                    if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                        break;
                    }
                }
                if !z.is_finite() || lattice.distance_to_lattice(z) <= tiny {
                    continue;
                }
                let Ok(rho) = w.wp(z) else { continue };
                let value = radicand.eval(rho);
                if value.norm() > 1e-9 * (1.0 + size(rho)) {
                    continue;
                }
                let zr = lattice.reduce_to_fundamental(z);
                if found
                    .iter()
                    .all(|f| lattice.distance_to_lattice(f - zr) > 1e-6 * lattice.min_norm())
                {
                    found.push(zr);
                }
            }
        }
    }
    found.sort_by(|a, b| {
        let (sa, ta) = lattice.coords(*a);
        let (sb, tb) = lattice.coords(*b);
        sa.total_cmp(&sb).then(ta.total_cmp(&tb))
    });
    Ok(found)
}
