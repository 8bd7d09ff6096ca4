use std::sync::OnceLock;

use proptest::prelude::*;
use weiercubic::elliptic::Weierstrass;
use weiercubic::pipeline::{
    circle_loop, evaluate_triple, locate_radicand_zeros, monodromy_check, run_sequence,
    stage_radicand, Route, SequencePlan,
};
use weiercubic::scenario::Scenario;
use weiercubic::C64;

fn load(name: &str) -> Scenario {
    let path = format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"));
    Scenario::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn solved(name: &str) -> (Weierstrass, SequencePlan) {
    let s = load(name);
    let w = s.weierstrass().unwrap();
    let plan = run_sequence(&s.geometry().unwrap(), &w, &s.sequence_options()).unwrap();
    (w, plan)
}

fn planted() -> &'static [(Weierstrass, SequencePlan); 3] {
    static CELL: OnceLock<[(Weierstrass, SequencePlan); 3]> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            "planted_skew.json",
            "planted_tilted.json",
            "planted_hexagonal.json",
        ]
        .map(solved)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planted_closure_everywhere(which in 0usize..3, s in 0.02f64..0.98, t in 0.02f64..0.98) {
        let (w, plan) = &planted()[which];
        let z = w.lattice().point(s, t);
        prop_assume!(w.lattice().distance_to_lattice(z) > 0.05);
        // isolated evaluations may land on a branch point or a pole; those are errors, not wrong values
        if let Ok(tri) = evaluate_triple(plan, w, z, Route::Derived, None) {
            prop_assert!(tri.relative_residual < 1e-6, "{z}: {}", tri.relative_residual);
            prop_assert_eq!(tri.order, [1, 2, 3]);
        }
    }

    #[test]
    fn wp_has_trivial_monodromy(which in 0usize..3, s in 0.1f64..0.9, t in 0.1f64..0.9, r in 0.01f64..0.2) {
        let (w, plan) = &planted()[which];
        let center = w.lattice().point(s, t);
        prop_assume!(w.lattice().distance_to_lattice(center) > 2.0 * r);
        if let Ok(rep) = monodromy_check(plan, w, Route::Derived, &circle_loop(center, r, 200)) {
            prop_assert!(rep.wp_difference < 1e-9);
        }
    }
}

#[test]
fn certificate_is_bounded_by_the_constraint_residual() {
    let generic = solved("generic.json");
    for (_, plan) in planted().iter().chain(std::iter::once(&generic)) {
        for s in &plan.stages {
            assert!(
                s.certificate <= s.constraint_residual() + 1e-10,
                "{} vs {}",
                s.certificate,
                s.constraint_residual()
            );
        }
    }
}

#[test]
fn square_roots_flip_around_simple_zeros_only() {
    for (w, plan) in planted() {
        let rad = stage_radicand(plan, Route::Derived);
        let zeros = locate_radicand_zeros(&rad, w).unwrap();
        assert!(!zeros.is_empty());
        let z0 = zeros[0];
        let mut gap = 0.05 * w.lattice().min_norm();
        for z1 in &zeros[1..] {
            gap = gap.min(0.25 * w.lattice().distance_to_lattice(z1 - z0));
        }
        let around = monodromy_check(plan, w, Route::Derived, &circle_loop(z0, gap, 400)).unwrap();
        assert!(around.sign_flips[0] && !around.trivial);
        assert!(around.wp_difference < 1e-9);

        let offset = z0 + C64::from_polar(3.0 * gap, 0.7);
        let quiet = monodromy_check(
            plan,
            w,
            Route::Derived,
            &circle_loop(offset, 0.5 * gap, 200),
        )
        .unwrap();
        assert!(!quiet.sign_flips[0]);
    }
}
