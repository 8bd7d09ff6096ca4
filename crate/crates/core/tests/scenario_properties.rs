use proptest::prelude::*;
use weiercubic::geometry::Axis;
use weiercubic::pipeline::{Branch, Route, StageConfig};
use weiercubic::scenario::{
    EllipticBlock, LoopSpec, SampleBlock, Scenario, SolverBlock, SCENARIO_SCHEMA,
};
use weiercubic::C64;

fn complex() -> impl Strategy<Value = C64> {
    (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(re, im)| C64::new(re, im))
}

fn stage() -> impl Strategy<Value = StageConfig> {
    (
        prop_oneof![Just(Axis::X1), Just(Axis::X2), Just(Axis::X3)],
        proptest::option::of([complex(), complex()]),
        any::<bool>(),
    )
        .prop_map(|(axis, seed, minus)| StageConfig {
            axis,
            seed,
            branch: if minus { Branch::Minus } else { Branch::Plus },
        })
}

fn loop_spec() -> impl Strategy<Value = LoopSpec> {
    prop_oneof![
        (complex(), 1e-4f64..1.0, 8usize..1000).prop_map(|(c, r, n)| LoopSpec::circle(c, r, n)),
        proptest::collection::vec(complex(), 2..6).prop_map(|p| LoopSpec {
            points: Some(p),
            center: None,
            radius: None,
            steps: None,
        }),
    ]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    let elliptic = (
        proptest::option::of([complex(), complex()]),
        proptest::option::of([complex(), complex()]),
    )
        .prop_map(|(periods, invariants)| EllipticBlock {
            periods,
            invariants,
        });
    let solver = (
        1e-14f64..1e-2,
        1usize..5000,
        proptest::option::of(complex()),
        any::<bool>(),
        proptest::collection::vec(stage(), 0..4),
    )
        .prop_map(|(tol, max_iter, anchor, printed, stages)| SolverBlock {
            tol,
            max_iter,
            anchor,
            route: if printed {
                Route::Printed
            } else {
                Route::Derived
            },
            stages,
        });
    let sample = (
        proptest::collection::vec(complex(), 0..5),
        proptest::collection::vec(loop_spec(), 0..3),
    )
        .prop_map(|(z, loops)| SampleBlock { z, loops });
    (elliptic, solver, sample).prop_map(|(elliptic, solver, sample)| Scenario {
        schema: SCENARIO_SCHEMA.to_owned(),
        geometry: None,
        elliptic,
        solver,
        sample,
    })
}

proptest! {
    #[test]
    fn round_trip_is_exact(s in scenario()) {
        let text = s.to_json();
        let back = Scenario::from_json(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn unknown_keys_are_rejected(s in scenario(), key in "[a-z]{3,8}") {
        prop_assume!(!["schema", "geometry", "elliptic", "solver", "sample"].contains(&key.as_str()));
        let mut value: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        value.as_object_mut().unwrap().insert(key, serde_json::Value::from(1));
        prop_assert!(Scenario::from_json(&value.to_string()).is_err());
    }
}

#[test]
fn bundled_scenarios_survive_a_round_trip() {
    let dir = format!("{}/../../scenarios", env!("CARGO_MANIFEST_DIR"));
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let s = Scenario::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(
            Scenario::from_json(&s.to_json()).unwrap(),
            s,
            "{}",
            path.display()
        );
    }
}
