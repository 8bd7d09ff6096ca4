use num_complex::Complex;

use super::EllipticError;
use crate::C64;

/// Lattice Λ = {mω₁ + nω₂}, oriented so that Im(ω₂/ω₁) > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodLattice {
    omega1: C64,
    omega2: C64,
    reduced: ReducedBasis,
}

/// Gauss-reduced basis (u, v): |u| ≤ |v|, |Re(v/u)| ≤ ½, Im(v/u) > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedBasis {
    pub u: C64,
    pub v: C64,
}

impl ReducedBasis {
    pub fn tau(&self) -> C64 {
        self.v / self.u
    }
}

const DEGENERACY_TOL: f64 = 1e-12;
const POLE_TOL: f64 = 1e-10;

impl PeriodLattice {
    /// Swaps the periods when Im(ω₂/ω₁) < 0.
    pub fn new(omega1: C64, omega2: C64) -> Result<Self, EllipticError> {
        if !(omega1.is_finite() && omega2.is_finite()) || omega1 == C64::new(0.0, 0.0) {
            return Err(EllipticError::NonFinitePeriod);
        }
        let ratio = omega2 / omega1;
        if !ratio.is_finite() || ratio.im.abs() <= DEGENERACY_TOL * ratio.norm() {
            return Err(EllipticError::DegenerateLattice { ratio });
        }
        let (omega1, omega2) = if ratio.im > 0.0 {
            (omega1, omega2)
        } else {
            (omega2, omega1)
        };
        Ok(Self {
            omega1,
            omega2,
            reduced: gauss_reduce(omega1, omega2),
        })
    }

    pub fn square() -> Self {
        Self::new(Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)).expect("square lattice")
    }

    /// (1, e^{iπ/3}).
    pub fn hexagonal() -> Self {
        let w = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        Self::new(Complex::new(1.0, 0.0), w).expect("hexagonal lattice")
    }

    pub fn omega1(&self) -> C64 {
        self.omega1
    }

    pub fn omega2(&self) -> C64 {
        self.omega2
    }

    pub fn tau(&self) -> C64 {
        self.omega2 / self.omega1
    }

    pub fn reduced(&self) -> ReducedBasis {
        self.reduced
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn min_norm(&self) -> f64 {
        self.reduced.u.norm()
    }

    pub fn pole_tolerance(&self) -> f64 {
        POLE_TOL * self.omega1.norm().max(self.omega2.norm())
    }

    /// Real coordinates (s, t) with z = sω₁ + tω₂.
    pub fn coords(&self, z: C64) -> (f64, f64) {
        coords_in(self.omega1, self.omega2, z)
    }

    pub fn point(&self, m: f64, n: f64) -> C64 {
        self.omega1 * m + self.omega2 * n
    }

    /// Representative of z in {sω₁ + tω₂ : s, t ∈ [0, 1)}.
    pub fn reduce_to_fundamental(&self, z: C64) -> C64 {
        let (s, t) = self.coords(z);
        let (fs, ft) = (s.floor(), t.floor());
        if fs == 0.0 && ft == 0.0 {
            return z;
        }
        z - self.omega1 * fs - self.omega2 * ft
    }

    pub fn nearest_lattice_point(&self, z: C64) -> C64 {
        let ReducedBasis { u, v } = self.reduced;
        let (x, y) = coords_in(u, v, z);
        let (x0, y0) = (x.round(), y.round());
        let mut best = u * x0 + v * y0;
        let mut best_d = (z - best).norm();
        for dx in -1..=1 {
            for dy in -1..=1 {
                let w = u * (x0 + dx as f64) + v * (y0 + dy as f64);
                let d = (z - w).norm();
                if d < best_d {
                    best = w;
                    best_d = d;
                }
            }
        }
        best
    }

    /// Distance from z to Λ.
    pub fn distance_to_lattice(&self, z: C64) -> f64 {
        (z - self.nearest_lattice_point(z)).norm()
    }

    /// Signed distance to the nearest point of Λ/2 that is not in Λ.
    pub fn distance_to_half_periods(&self, z: C64) -> f64 {
        let halves = [
            self.omega1 * 0.5,
            self.omega2 * 0.5,
            (self.omega1 + self.omega2) * 0.5,
        ];
        halves
            .iter()
            .map(|h| self.distance_to_lattice(z - h))
            .fold(f64::INFINITY, f64::min)
    }
}

fn coords_in(a: C64, b: C64, z: C64) -> (f64, f64) {
    // Solve z = s a + t b over the reals (Cramer on the 2x2 real system).
    let det = a.re * b.im - a.im * b.re;
    let s = (z.re * b.im - z.im * b.re) / det;
    let t = (a.re * z.im - a.im * z.re) / det;
    (s, t)
}

fn gauss_reduce(w1: C64, w2: C64) -> ReducedBasis {
    let (mut u, mut v) = (w1, w2);
    if v.norm_sqr() < u.norm_sqr() {
        std::mem::swap(&mut u, &mut v);
    }
    for _ in 0..200 {
        let mu = (v / u).re.round();
        v -= u * mu;
        if v.norm_sqr() < u.norm_sqr() {
            std::mem::swap(&mut u, &mut v);
        } else {
            break;
        }
    }
    if (v / u).im < 0.0 {
        v = -v;
    }
    ReducedBasis { u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        Complex::new(re, im)
    }

    #[test]
    fn orientation_is_normalized_by_swapping() {
        let l = PeriodLattice::new(c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        assert_eq!(l.omega1(), c(1.0, 0.0));
        assert_eq!(l.omega2(), c(0.0, 1.0));
        assert!(l.tau().im > 0.0);
    }

    #[test]
    fn real_ratio_is_rejected() {
        assert!(matches!(
            PeriodLattice::new(c(1.0, 0.0), c(2.0, 0.0)),
            Err(EllipticError::DegenerateLattice { .. })
        ));
        assert!(PeriodLattice::new(c(0.0, 0.0), c(1.0, 1.0)).is_err());
    }

    #[test]
    fn reduction_keeps_inside_points() {
        let l = PeriodLattice::square();
        let z = c(0.3, 0.2);
        assert_eq!(l.reduce_to_fundamental(z), z);
    }

    #[test]
    fn reduction_removes_one_period() {
        let l = PeriodLattice::square();
        let z = l.reduce_to_fundamental(c(0.3, 0.0) + l.omega1());
        assert!((z - c(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reduced_basis_is_short() {
        let l = PeriodLattice::new(c(1.0, 0.0), c(7.3, 0.9)).unwrap();
        let b = l.reduced();
        let tau = b.tau();
        assert!(tau.re.abs() <= 0.5 + 1e-12);
        assert!(tau.norm() >= 1.0 - 1e-12);
        assert!(tau.im > 0.0);
        // same covolume
        let area = |a: C64, b: C64| (a.re * b.im - a.im * b.re).abs();
        assert!((area(b.u, b.v) - area(l.omega1(), l.omega2())).abs() < 1e-12);
    }

    #[test]
    fn nearest_point_and_distance() {
        let l = PeriodLattice::hexagonal();
        let w = l.point(3.0, -2.0);
        assert!((l.nearest_lattice_point(w + c(0.01, -0.02)) - w).norm() < 1e-12);
        assert!(l.distance_to_half_periods(l.omega2() * 0.5 + l.omega1()) < 1e-14);
    }
}
