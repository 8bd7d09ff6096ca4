//! Truncated lattice sums. Slow, but independent of the series path.

use num_complex::Complex;

use super::{EllipticError, EllipticInvariants, PeriodLattice};
use crate::C64;

/// Box-truncated g₂ = 60Σω⁻⁴, g₃ = 140Σω⁻⁶ with a convergence estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EisensteinSum {
    pub invariants: EllipticInvariants,
    pub cutoff: usize,
    /// |g₂(cutoff) − g₂(cutoff/2)|.
    pub g2_estimate: f64,
    /// |g₃(cutoff) − g₃(cutoff/2)|.
    pub g3_estimate: f64,
}

/// Sums over |m|, |n| ≤ cutoff, (m, n) ≠ (0, 0), restricted to the disk
/// inscribed in that index box.
///
/// The disk is invariant under every rotation preserving Λ, so symmetry
/// zeros (g₃ on the square lattice, g₂ on the hexagonal one) hold to
/// rounding rather than to the box-shape error of order cutoff⁻².
pub fn eisenstein_invariants(
    lattice: &PeriodLattice,
    cutoff: usize,
) -> Result<EisensteinSum, EllipticError> {
    if cutoff < 10 {
        return Err(EllipticError::InvalidCutoff(cutoff));
    }
    let n = cutoff as i64;
    let radius = inscribed_radius(lattice, cutoff);
    let half_radius = inscribed_radius(lattice, cutoff / 2);
    let zero = Complex::new(0.0, 0.0);
    let (mut s4, mut s6) = (zero, zero);
    let (mut h4, mut h6) = (zero, zero);
    // Outer shells first so small terms are accumulated before large ones.
    for shell in (1..=n).rev() {
        let (mut a4, mut a6) = (zero, zero);
        let (mut b4, mut b6) = (zero, zero);
        for_shell(shell, |m, k| {
            let w = lattice.point(m as f64, k as f64);
            let r = w.norm();
            if r > radius {
                return;
            }
            let inv2 = 1.0 / (w * w);
            let inv4 = inv2 * inv2;
            a4 += inv4;
            a6 += inv4 * inv2;
            if r <= half_radius {
                b4 += inv4;
                b6 += inv4 * inv2;
            }
        });
        s4 += a4;
        s6 += a6;
        h4 += b4;
        h6 += b6;
    }
    let (g2, g3) = (60.0 * s4, 140.0 * s6);
    let invariants = EllipticInvariants::new(g2, g3)?;
    Ok(EisensteinSum {
        invariants,
        cutoff,
        g2_estimate: (g2 - 60.0 * h4).norm(),
        g3_estimate: (g3 - 140.0 * h6).norm(),
    })
}

/// 1/z² + Σ[(z−ω)⁻² − ω⁻²] over the box |m|, |n| ≤ cutoff.
pub fn wp_lattice_sum(z: C64, lattice: &PeriodLattice, cutoff: usize) -> C64 {
    let n = cutoff as i64;
    let mut total = Complex::new(0.0, 0.0);
    for shell in (1..=n).rev() {
        let mut acc = Complex::new(0.0, 0.0);
        for_shell(shell, |m, k| {
            let w = lattice.point(m as f64, k as f64);
            let d = z - w;
            acc += 1.0 / (d * d) - 1.0 / (w * w);
        });
        total += acc;
    }
    total + 1.0 / (z * z)
}

/// Radius of the largest origin-centred disk inside the index box.
fn inscribed_radius(lattice: &PeriodLattice, cutoff: usize) -> f64 {
    let (w1, w2) = (lattice.omega1(), lattice.omega2());
    let area = (w1.conj() * w2).im.abs();
    let h = (area / w1.norm()).min(area / w2.norm());
    h * cutoff as f64 * (1.0 + 1e-12)
}

/// Visits the lattice indices with max(|m|, |n|) = shell.
fn for_shell(shell: i64, mut f: impl FnMut(i64, i64)) {
    for m in -shell..=shell {
        f(m, shell);
        f(m, -shell);
    }
    for k in -shell + 1..shell {
        f(shell, k);
        f(-shell, k);
    }
}
