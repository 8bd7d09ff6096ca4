use super::ReductionError;
use crate::geometry::AxisView;
use crate::poly::{
    eliminated_bivariate, interpolate_coeffs, mobius_substitute_cleared, DensePoly, MobiusQuadruple,
};
use crate::ratios::RatioSet;
use crate::C64;

/// Largest tolerated share of the m⁴ term at the biggest sample.
const GUARD_TOL: f64 = 1e-9;
const SAMPLE_COUNT: usize = 5;

/// ñ² = P̄₁m³ + P̄₂m² + P̄₃m + P̄₄ for one stage, with each P̄ᵢ a polynomial
/// in ñ of degree at most 2.
///
/// Obtained from E(m, n) (the cleared cubic with a = m·c and G eliminated)
/// through n = ñ/(√k·√C) − (L₁B/C + L₂) and division by λ = (c/d)/((c/d) + 2),
/// the m⁰ñ² coefficient of E.
#[derive(Debug, Clone, PartialEq)]
pub struct DepressedForm {
    pub ratios: RatioSet,
    pub view: AxisView,
    pub k: C64,
    pub l1: C64,
    pub l2: C64,
    /// √k·√C, principal branches.
    pub sigma: C64,
    /// L₁B/C + L₂.
    pub shift: C64,
    pub lambda: C64,
    /// P̄₁..P̄₄ (coefficients of m³, m², m, 1), each as a polynomial in ñ.
    pub pbar: [DensePoly<C64>; 4],
    /// Relative size of the recovered m⁴ coefficient.
    pub guard: f64,
    /// Largest relative mismatch against the closed-form E(m, n).
    pub identity_residual: f64,
}

impl DepressedForm {
    /// P̄ᵢ(0): the coefficients compared against (4, 0, −g₂, −g₃).
    pub fn principal(&self) -> [C64; 4] {
        [0, 1, 2, 3].map(|i| self.pbar[i].coeff(0))
    }

    /// ñ and ñ² coefficients of each P̄ᵢ.
    pub fn additional(&self) -> [[C64; 2]; 4] {
        [0, 1, 2, 3].map(|i| [self.pbar[i].coeff(1), self.pbar[i].coeff(2)])
    }

    /// Σ P̄ᵢ(ñ)·m^(3−i).
    pub fn eval_rhs(&self, m: C64, nt: C64) -> C64 {
        self.pbar
            .iter()
            .fold(C64::new(0.0, 0.0), |acc, p| acc * m + p.eval(nt))
    }

    pub fn n_of(&self, nt: C64) -> C64 {
        nt / self.sigma - self.shift
    }

    pub fn ntilde_of(&self, n: C64) -> C64 {
        self.sigma * (n + self.shift)
    }

    /// ñ² − Σ P̄ᵢ(ñ) m^(3−i); vanishes exactly where E(m, n) does.
    pub fn residual(&self, m: C64, nt: C64) -> C64 {
        nt * nt - self.eval_rhs(m, nt)
    }
}

/// Five points on the circle of radius 1.5·max(1, |b/d|), which keeps them
/// clear of m = b/d (where the substitution degenerates) and the
/// Vandermonde system well conditioned.
pub fn default_m_samples(b_over_d: C64) -> Vec<C64> {
    let radius = 1.5 * b_over_d.norm().max(1.0);
    (0..SAMPLE_COUNT)
        .map(|j| {
            C64::from_polar(
                radius,
                0.3 + std::f64::consts::TAU * j as f64 / SAMPLE_COUNT as f64,
            )
        })
        .collect()
}

pub fn depress(
    view: &AxisView,
    ratios: &RatioSet,
    m_samples: &[C64],
) -> Result<DepressedForm, ReductionError> {
    let RatioSet {
        b_over_d: bd,
        c_over_d: cd,
        ..
    } = *ratios;
    let (a, b, c) = (view.a, view.b, view.c);
    if c.norm() == 0.0 || !c.is_finite() {
        return Err(ReductionError::DivisionByZero("C"));
    }
    let k = ratios.k();
    let l1 = ratios.l1();
    let l2 = ratios.l2();
    let sigma = k.sqrt() * c.sqrt();
    let shift = l1 * b / c + l2;
    let lambda = cd / (cd + 2.0);
    if sigma.norm() == 0.0 {
        return Err(ReductionError::DivisionByZero("k·C"));
    }

    // ñ-coefficients of λ·(ñ² − P̄) at each sample m
    let mut rows: [Vec<(C64, C64)>; 3] = Default::default();
    for &m in m_samples {
        let g = -(a * m * m * m + b * m * m + c * m);
        let quad = MobiusQuadruple::new(m * cd, bd, cd, C64::new(1.0, 0.0))?;
        let cleared = mobius_substitute_cleared([a, b, c, g], &quad)?;
        let quadratic = DensePoly::new(cleared.coeffs().iter().take(3).copied().collect())?;
        let in_nt = quadratic.compose_affine(-shift, 1.0 / sigma);
        for (j, row) in rows.iter_mut().enumerate() {
            row.push((m, in_nt.coeff(j)));
        }
    }

    let m_max = m_samples.iter().map(|m| m.norm()).fold(0.0, f64::max);
    let mut guard: f64 = 0.0;
    let mut by_power: Vec<DensePoly<C64>> = Vec::with_capacity(3);
    for row in &rows {
        let fit = interpolate_coeffs(row, 4)?;
        let size = row.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        if size > 0.0 {
            guard = guard.max(fit.poly.coeff(4).norm() * m_max.powi(4) / size);
        }
        by_power.push(fit.poly);
    }
    if guard.is_nan() || guard >= GUARD_TOL {
        return Err(ReductionError::StructuralViolation { guard });
    }

    let pbar = [0usize, 1, 2, 3].map(|i| {
        let power = 3 - i;
        let mut coeffs: Vec<C64> = by_power.iter().map(|e| -e.coeff(power) / lambda).collect();
        if power == 0 {
            coeffs[2] += 1.0;
        }
        DensePoly::new(coeffs).expect("three coefficients")
    });

    let mut form = DepressedForm {
        ratios: *ratios,
        view: *view,
        k,
        l1,
        l2,
        sigma,
        shift,
        lambda,
        pbar,
        guard,
        identity_residual: 0.0,
    };
    form.identity_residual = identity_residual(&form, m_max.max(1.0))?;
    Ok(form)
}

/// Compares λ·(ñ² − P̄) with the closed-form E(m, n) on a fixed spread of
/// points inside the sampled m range.
fn identity_residual(form: &DepressedForm, radius: f64) -> Result<f64, ReductionError> {
    let v = &form.view;
    let exact = eliminated_bivariate(
        [v.a, v.b, v.c],
        form.ratios.b_over_d,
        form.ratios.c_over_d,
        C64::new(1.0, 0.0),
    )?;
    let n_scale = form.shift.norm().max(1.0);
    let mut worst: f64 = 0.0;
    for j in 0..10 {
        let t = j as f64;
        let m = C64::from_polar(radius * (0.2 + 0.08 * t), 0.7 + 1.9 * t);
        let n = C64::from_polar(n_scale * (0.3 + 0.1 * t), -0.4 + 2.3 * t);
        let nt = form.ntilde_of(n);
        let lhs = exact.eval(m, n);
        let rhs = form.lambda * form.residual(m, nt);
        let size = exact
            .grid()
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(jj, c)| (i, jj, c)))
            .map(|(i, jj, c)| c.norm() * m.norm().powi(i as i32) * n.norm().powi(jj as i32))
            .sum::<f64>()
            .max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).norm() / size);
    }
    Ok(worst)
}
