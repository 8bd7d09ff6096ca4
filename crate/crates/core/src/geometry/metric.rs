//! Christoffel symbols and Ricci tensor from a sampled metric.

use nalgebra::Matrix3;

use super::{zero_mat, zero_tensor, GeometryData, GeometryError, Mat3, Tensor3};
use crate::C64;

type Real3 = [[f64; 3]; 3];

/// Metric samples on an n×n×n grid with uniform spacing, centred on the
/// evaluation point. `values[(i*n + j)*n + k]` sits at offset (i, j, k) − n/2.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGrid {
    n: usize,
    spacing: f64,
    values: Vec<Real3>,
}

impl MetricGrid {
    pub fn new(n: usize, spacing: f64, values: Vec<Real3>) -> Result<Self, GeometryError> {
        if n < 5 || n.is_multiple_of(2) {
            return Err(GeometryError::Grid(format!(
                "need an odd size of at least 5, got {n}"
            )));
        }
        if values.len() != n * n * n {
            return Err(GeometryError::Grid(format!(
                "expected {} samples, got {}",
                n * n * n,
                values.len()
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(GeometryError::Grid("spacing must be positive".into()));
        }
        Ok(Self { n, spacing, values })
    }

    /// Samples `metric` at centre + spacing·(offset).
    pub fn sample(
        n: usize,
        spacing: f64,
        centre: [f64; 3],
        metric: impl Fn([f64; 3]) -> Real3,
    ) -> Result<Self, GeometryError> {
        let h = (n / 2) as f64;
        let mut values = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = [
                        centre[0] + (i as f64 - h) * spacing,
                        centre[1] + (j as f64 - h) * spacing,
                        centre[2] + (k as f64 - h) * spacing,
                    ];
                    values.push(metric(x));
                }
            }
        }
        Self::new(n, spacing, values)
    }

    fn at(&self, idx: [usize; 3]) -> &Real3 {
        &self.values[(idx[0] * self.n + idx[1]) * self.n + idx[2]]
    }

    /// ∂_a g_ij at a grid index by central differences.
    fn dmetric(&self, idx: [usize; 3]) -> [Real3; 3] {
        let mut d = [[[0.0; 3]; 3]; 3];
        for (a, da) in d.iter_mut().enumerate() {
            let (mut up, mut dn) = (idx, idx);
            up[a] += 1;
            dn[a] -= 1;
            let (gu, gd) = (self.at(up), self.at(dn));
            for i in 0..3 {
                for j in 0..3 {
                    da[i][j] = (gu[i][j] - gd[i][j]) / (2.0 * self.spacing);
                }
            }
        }
        d
    }

    /// Γ^r_ij at a grid index.
    fn christoffel(&self, idx: [usize; 3]) -> Result<[Real3; 3], GeometryError> {
        let g = self.at(idx);
        let inv = Matrix3::from_fn(|i, j| g[i][j])
            .try_inverse()
            .ok_or(GeometryError::SingularMetric)?;
        let d = self.dmetric(idx);
        let mut gamma = [[[0.0; 3]; 3]; 3];
        for (r, gr) in gamma.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    gr[i][j] = 0.5
                        * (0..3)
                            .map(|s| inv[(r, s)] * (d[i][s][j] + d[j][s][i] - d[s][i][j]))
                            .sum::<f64>();
                }
            }
        }
        Ok(gamma)
    }
}

/// Second-order central differences at the grid centre; p = 1.
pub fn christoffel_ricci_from_metric(grid: &MetricGrid) -> Result<GeometryData, GeometryError> {
    let c = grid.n / 2;
    let centre = [c, c, c];
    let gamma = grid.christoffel(centre)?;
    // ∂_a Γ^r_ij from Γ at the neighbours
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for (a, da) in dgamma.iter_mut().enumerate() {
        let (mut up, mut dn) = (centre, centre);
        up[a] += 1;
        dn[a] -= 1;
        let (gu, gd) = (grid.christoffel(up)?, grid.christoffel(dn)?);
        for r in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    da[r][i][j] = (gu[r][i][j] - gd[r][i][j]) / (2.0 * grid.spacing);
                }
            }
        }
    }
    // R_ij = ∂_r Γ^r_ij − ∂_j Γ^r_ir + Γ^r_rs Γ^s_ij − Γ^r_js Γ^s_ir
    let mut ricci: Mat3 = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for r in 0..3 {
                acc += dgamma[r][r][i][j] - dgamma[j][r][i][r];
                for s in 0..3 {
                    acc += gamma[r][r][s] * gamma[s][i][j] - gamma[r][j][s] * gamma[s][i][r];
                }
            }
            ricci[i][j] = C64::new(acc, 0.0);
        }
    }
    // symmetrize away rounding
    for i in 0..3 {
        for j in 0..i {
            let m = (ricci[i][j] + ricci[j][i]) * 0.5;
            ricci[i][j] = m;
            ricci[j][i] = m;
        }
    }
    let g = grid.at(centre);
    let mut metric = zero_mat();
    let mut gam: Tensor3 = zero_tensor();
    for i in 0..3 {
        for j in 0..3 {
            metric[i][j] = C64::new(g[i][j], 0.0);
            for r in 0..3 {
                gam[r][i][j] = C64::new(gamma[r][i][j], 0.0);
            }
        }
    }
    GeometryData::new(1.0, metric, gam, ricci)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: f64, b: f64, c: f64) -> Real3 {
        [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]]
    }

    #[test]
    fn constant_metric_is_flat() {
        let m = [[2.0, 0.3, 0.0], [0.3, 1.0, 0.1], [0.0, 0.1, 1.5]];
        let grid = MetricGrid::sample(5, 0.1, [0.0; 3], |_| m).unwrap();
        let geom = christoffel_ricci_from_metric(&grid).unwrap();
        assert!(geom
            .gamma()
            .iter()
            .flatten()
            .flatten()
            .all(|z| z.norm() == 0.0));
        assert!(geom.ricci().iter().flatten().all(|z| z.norm() == 0.0));
        assert_eq!(geom.metric()[0][1], C64::new(0.3, 0.0));
    }

    #[test]
    fn identity_grid() {
        let grid = MetricGrid::sample(5, 0.2, [1.0, 2.0, 3.0], |_| diag(1.0, 1.0, 1.0)).unwrap();
        let geom = christoffel_ricci_from_metric(&grid).unwrap();
        assert_eq!(*geom.metric(), crate::geometry::identity_mat());
        assert_eq!(geom.p(), 1.0);
    }

    #[test]
    fn cylindrical_chart_is_flat_to_second_order() {
        // (r, θ, z) with g = diag(1, r², 1) at r = 1.3
        let r0 = 1.3;
        let err = |h: f64| {
            let grid =
                MetricGrid::sample(5, h, [r0, 0.4, 0.0], |x| diag(1.0, x[0] * x[0], 1.0)).unwrap();
            let geom = christoffel_ricci_from_metric(&grid).unwrap();
            let g = geom.gamma();
            // Γ^r_θθ = −r, Γ^θ_rθ = 1/r
            assert!((g[0][1][1].re + r0).abs() < 1e-8);
            assert!((g[1][0][1].re - 1.0 / r0).abs() < 10.0 * h * h);
            geom.ricci()
                .iter()
                .flatten()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.02), err(0.01));
        assert!(e1 < 1e-3);
        assert!(e2 < e1 / 3.0 || e2 < 1e-9);
    }

    #[test]
    fn round_sphere_factor_has_unit_curvature() {
        // (θ, φ, z) with g = diag(1, sin²θ, 1): R_θθ = 1, R_φφ = sin²θ, R_zz = 0
        let t0 = 1.1f64;
        let grid = MetricGrid::sample(5, 0.005, [t0, 0.0, 0.0], |x| {
            diag(1.0, x[0].sin().powi(2), 1.0)
        })
        .unwrap();
        let geom = christoffel_ricci_from_metric(&grid).unwrap();
        let r = geom.ricci();
        assert!((r[0][0].re - 1.0).abs() < 1e-4);
        assert!((r[1][1].re - t0.sin().powi(2)).abs() < 1e-4);
        assert!(r[2][2].norm() < 1e-9);
        assert!(r[0][1].norm() < 1e-9);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(MetricGrid::new(4, 0.1, vec![diag(1.0, 1.0, 1.0); 64]).is_err());
        assert!(MetricGrid::new(5, 0.1, vec![diag(1.0, 1.0, 1.0); 10]).is_err());
        let grid = MetricGrid::sample(5, 0.1, [0.0; 3], |_| diag(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(
            christoffel_ricci_from_metric(&grid),
            Err(GeometryError::SingularMetric)
        );
    }
}
