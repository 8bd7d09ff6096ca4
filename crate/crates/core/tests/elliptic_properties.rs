use proptest::prelude::*;
use weiercubic::elliptic::{eisenstein_invariants, wp_lattice_sum, PeriodLattice, Weierstrass};
use weiercubic::C64;

fn lattices() -> impl Strategy<Value = PeriodLattice> {
    (0.8f64..1.5, 0.4f64..2.7)
        .prop_map(|(r, t)| PeriodLattice::new(C64::new(1.0, 0.0), C64::from_polar(r, t)).unwrap())
}

/// Point of the fundamental cell at least 0.05 from every lattice point.
fn cell_point(l: &PeriodLattice, s: f64, t: f64) -> Option<C64> {
    let z = l.point(s, t);
    (l.distance_to_lattice(z) >= 0.05).then_some(z)
}

/// Box sums at N, 2N, 4N with the N⁻² and N⁻³ terms extrapolated away.
fn wp_direct(z: C64, l: &PeriodLattice, n: usize) -> C64 {
    let s = [n, 2 * n, 4 * n].map(|k| wp_lattice_sum(z, l, k));
    let r1 = [(4.0 * s[1] - s[0]) / 3.0, (4.0 * s[2] - s[1]) / 3.0];
    (8.0 * r1[1] - r1[0]) / 7.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differential_equation_holds(l in lattices(), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let Some(z) = cell_point(&l, s, t) else { return Ok(()) };
        let w = Weierstrass::new(l).unwrap();
        let (p, dp) = w.wp_pair(z).unwrap();
        let defect = (dp * dp - w.invariants().cubic(p)).norm() / (1.0 + p.norm().powi(3));
        prop_assert!(defect < 1e-9, "defect {defect:e} at {z}");
    }

    #[test]
    fn doubly_periodic(l in lattices(), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let Some(z) = cell_point(&l, s, t) else { return Ok(()) };
        let w = Weierstrass::new(l).unwrap();
        let p = w.wp(z).unwrap();
        for period in [l.omega1(), l.omega2()] {
            let q = w.wp(z + period).unwrap();
            prop_assert!((q - p).norm() < 1e-9 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn even_and_odd(l in lattices(), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let Some(z) = cell_point(&l, s, t) else { return Ok(()) };
        let w = Weierstrass::new(l).unwrap();
        let (p, dp) = w.wp_pair(z).unwrap();
        let (pm, dpm) = w.wp_pair(-z).unwrap();
        prop_assert!((pm - p).norm() < 1e-10 * (1.0 + p.norm()));
        prop_assert!((dpm + dp).norm() < 1e-10 * (1.0 + dp.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn series_agrees_with_direct_sum(l in lattices(), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let Some(z) = cell_point(&l, s, t) else { return Ok(()) };
        let w = Weierstrass::new(l).unwrap();
        let fast = w.wp(z).unwrap();
        let slow = wp_direct(z, &l, 50);
        prop_assert!((fast - slow).norm() < 1e-8 * fast.norm(), "{fast} vs {slow}");
    }
}

#[test]
fn eisenstein_steps_shrink() {
    // g₂ vanishes identically on the hexagonal lattice, so follow g₃ there
    let generic = PeriodLattice::new(C64::new(1.0, 0.0), C64::new(0.2, 1.1)).unwrap();
    let cases = [
        (PeriodLattice::square(), false),
        (generic, false),
        (PeriodLattice::hexagonal(), true),
    ];
    for (l, use_g3) in cases {
        let g: Vec<C64> = [50, 100, 200, 400, 800]
            .iter()
            .map(|&n| {
                let inv = eisenstein_invariants(&l, n).unwrap().invariants;
                if use_g3 {
                    inv.g3
                } else {
                    inv.g2
                }
            })
            .collect();
        let steps: Vec<f64> = g.windows(2).map(|p| (p[1] - p[0]).norm()).collect();
        assert!(steps.windows(2).all(|s| s[1] < s[0]), "{steps:?}");
    }
}

#[test]
fn direct_sums_approach_series_invariants() {
    let l = PeriodLattice::new(C64::new(1.0, 0.0), C64::new(0.2, 1.1)).unwrap();
    let series = Weierstrass::new(l).unwrap().invariants();
    let direct = eisenstein_invariants(&l, 200).unwrap();
    let err = (direct.invariants.g2 - series.g2).norm();
    assert!(
        err < direct.g2_estimate,
        "{err:e} vs estimate {:e}",
        direct.g2_estimate
    );
}
