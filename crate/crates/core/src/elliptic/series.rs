use std::f64::consts::PI;

use num_complex::Complex;

use super::{EllipticError, EllipticInvariants, PeriodLattice};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassOptions {
    /// Relative size of the last retained Laurent term.
    pub series_tol: f64,
    pub max_terms: usize,
    /// Halving threshold, as a fraction of the shortest period.
    pub halving_radius: f64,
}

impl Default for WeierstrassOptions {
    fn default() -> Self {
        Self {
            series_tol: 1e-17,
            max_terms: 64,
            halving_radius: 0.4,
        }
    }
}

/// Fast ℘ evaluator bound to one lattice.
///
/// Works on the normalized lattice (1, τ) obtained by dividing through by
/// the shortest period u, where ℘(z; Λ) = u⁻² ℘(z/u; Λ/u).
#[derive(Debug, Clone)]
pub struct Weierstrass {
    lattice: PeriodLattice,
    invariants: EllipticInvariants,
    options: WeierstrassOptions,
    unit: C64,
    /// Laurent coefficients c₂.. of the normalized lattice; index k holds c_k.
    coeffs: Vec<C64>,
}

impl Weierstrass {
    pub fn new(lattice: PeriodLattice) -> Result<Self, EllipticError> {
        Self::with_options(lattice, WeierstrassOptions::default())
    }

    pub fn with_options(
        lattice: PeriodLattice,
        options: WeierstrassOptions,
    ) -> Result<Self, EllipticError> {
        let basis = lattice.reduced();
        let unit = basis.u;
        let (g2n, g3n) = normalized_invariants(basis.tau());
        let invariants = EllipticInvariants::new(g2n / unit.powi(4), g3n / unit.powi(6))?;
        let coeffs = laurent_coefficients(g2n, g3n, options.max_terms);
        Ok(Self {
            lattice,
            invariants,
            options,
            unit,
            coeffs,
        })
    }

    pub fn lattice(&self) -> &PeriodLattice {
        &self.lattice
    }

    pub fn invariants(&self) -> EllipticInvariants {
        self.invariants
    }

    pub fn wp(&self, z: C64) -> Result<C64, EllipticError> {
        self.wp_pair(z).map(|(p, _)| p)
    }

    pub fn wp_prime(&self, z: C64) -> Result<C64, EllipticError> {
        self.wp_pair(z).map(|(_, dp)| dp)
    }

    /// (℘(z), ℘′(z)).
    pub fn wp_pair(&self, z: C64) -> Result<(C64, C64), EllipticError> {
        let near = self.lattice.nearest_lattice_point(z);
        let distance = (z - near).norm();
        if !z.is_finite() || distance < self.lattice.pole_tolerance() {
            return Err(EllipticError::Pole { z, distance });
        }
        let mut w = (z - near) / self.unit;
        let mut halvings = 0;
        while w.norm() > self.options.halving_radius {
            w *= 0.5;
            halvings += 1;
        }
        let (mut p, mut dp) = self.laurent(w)?;
        let g2n = self.coeffs[2] * 20.0;
        for _ in 0..halvings {
            let ddp = 6.0 * p * p - g2n * 0.5;
            let dp2 = dp * dp;
            let p_next = -2.0 * p + ddp * ddp / (4.0 * dp2);
            let dp_next = -dp + ddp * (12.0 * p * dp2 - ddp * ddp) / (4.0 * dp2 * dp);
            p = p_next;
            dp = dp_next;
        }
        let u2 = self.unit * self.unit;
        Ok((p / u2, dp / (u2 * self.unit)))
    }

    /// ℘ at ω₁/2, (ω₁+ω₂)/2, ω₂/2, in that order.
    pub fn half_period_roots(&self) -> Result<[C64; 3], EllipticError> {
        let (w1, w2) = (self.lattice.omega1(), self.lattice.omega2());
        Ok([
            self.wp(w1 * 0.5)?,
            self.wp((w1 + w2) * 0.5)?,
            self.wp(w2 * 0.5)?,
        ])
    }

    fn laurent(&self, w: C64) -> Result<(C64, C64), EllipticError> {
        let w2 = w * w;
        let inv = 1.0 / w2;
        let mut p = inv;
        let mut dp = -2.0 * inv / w;
        // w^(2k-3) for k = 2
        let mut odd = w;
        let mut quiet = 0;
        let mut last = f64::INFINITY;
        for k in 2..self.coeffs.len() {
            let term = self.coeffs[k] * odd * w;
            p += term;
            dp += self.coeffs[k] * odd * (2 * k - 2) as f64;
            last = term.norm();
            // Symmetric lattices have every second or third coefficient zero.
            if last <= self.options.series_tol * p.norm() {
                quiet += 1;
                if quiet == 4 {
                    return Ok((p, dp));
                }
            } else {
                quiet = 0;
            }
            odd *= w2;
        }
        Err(EllipticError::Accuracy {
            bound: last / p.norm(),
        })
    }
}

/// (g₂, g₃) of the lattice (1, τ) from the q-expansions of E₄ and E₆.
fn normalized_invariants(tau: C64) -> (C64, C64) {
    let q = (Complex::new(0.0, 2.0 * PI) * tau).exp();
    let mut e4 = Complex::new(1.0, 0.0);
    let mut e6 = Complex::new(1.0, 0.0);
    let mut qn = Complex::new(1.0, 0.0);
    for n in 1..400 {
        qn *= q;
        let nf = n as f64;
        let d = qn / (1.0 - qn);
        e4 += 240.0 * nf.powi(3) * d;
        e6 -= 504.0 * nf.powi(5) * d;
        if nf.powi(5) * d.norm() < 1e-20 {
            break;
        }
    }
    let two_pi = 2.0 * PI;
    (two_pi.powi(4) * e4 / 12.0, two_pi.powi(6) * e6 / 216.0)
}

/// c₂ = g₂/20, c₃ = g₃/28, c_k = 3/((2k+1)(k−3)) Σ_{m=2}^{k−2} c_m c_{k−m}.
fn laurent_coefficients(g2: C64, g3: C64, count: usize) -> Vec<C64> {
    let zero = Complex::new(0.0, 0.0);
    let mut c = vec![zero, zero, g2 / 20.0, g3 / 28.0];
    for k in 4..count.max(4) {
        let s: C64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
        c.push(s * (3.0 / ((2 * k + 1) * (k - 3)) as f64));
    }
    c
}

/// One-shot ℘(z); build a [`Weierstrass`] when evaluating repeatedly.
pub fn wp(z: C64, lattice: &PeriodLattice) -> Result<C64, EllipticError> {
    Weierstrass::new(*lattice)?.wp(z)
}

pub fn wp_prime(z: C64, lattice: &PeriodLattice) -> Result<C64, EllipticError> {
    Weierstrass::new(*lattice)?.wp_prime(z)
}

pub fn half_period_roots(lattice: &PeriodLattice) -> Result<[C64; 3], EllipticError> {
    Weierstrass::new(*lattice)?.half_period_roots()
}
