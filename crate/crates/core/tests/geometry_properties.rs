use proptest::prelude::*;
use weiercubic::audit::AuditStatus;
use weiercubic::elliptic::{PeriodLattice, Weierstrass};
use weiercubic::geometry::{
    assemble_cubic, axis_view, k_coefficients, symmetrize, Axis, GeometryData, Mat3, Tensor3,
};
use weiercubic::pipeline::{formula_audit, plant, run_sequence, PlantSpec, SequenceOptions};
use weiercubic::C64;

fn complex(scale: f64) -> impl Strategy<Value = C64> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| C64::new(re, im))
}

fn sym() -> impl Strategy<Value = Mat3> {
    prop::array::uniform6(complex(1.0))
        .prop_map(|v| [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]])
}

fn geometry() -> impl Strategy<Value = GeometryData> {
    (0.2f64..3.0, sym(), sym(), sym(), sym(), sym())
        .prop_map(|(p, g, r, a, b, c)| GeometryData::new(p, g, [a, b, c] as Tensor3, r).unwrap())
}

proptest! {
    #[test]
    fn axis_view_reproduces_the_form(
        geom in geometry(),
        fixed in prop::array::uniform2(complex(2.0)),
        ts in prop::array::uniform4(complex(2.0)),
    ) {
        let cubic = assemble_cubic(&geom);
        for axis in Axis::ALL {
            let view = axis_view(&cubic, axis, fixed);
            for t in ts {
                let mut x = [C64::new(0.0, 0.0); 3];
                x[axis.index()] = t;
                let o = axis.others();
                x[o[0]] = fixed[0];
                x[o[1]] = fixed[1];
                let diff = (view.eval(t) - cubic.evaluate(x)).norm();
                prop_assert!(diff <= 1e-12 * cubic.magnitude(x));
            }
        }
    }

    #[test]
    fn symmetrization_is_idempotent(geom in geometry()) {
        let t = assemble_cubic(&geom).t;
        let again = symmetrize(&t);
        for (a, b) in t.iter().flatten().flatten().zip(again.iter().flatten().flatten()) {
            prop_assert!((a - b).norm() <= 1e-15 * (1.0 + a.norm()));
        }
    }

    /// K⁽¹⁾ is affine and K⁽²⁾ quadratic without constant term in m; at
    /// d/c = −1/2 the first collapses to −R and the second to its m² part.
    #[test]
    fn k_coefficients_structure(geom in geometry(), m in complex(2.0), dc in complex(2.0)) {
        let at = |m: C64, dc: C64| k_coefficients(&geom, m, dc);
        let zero = C64::new(0.0, 0.0);
        let (k0, k1, k2) = (at(zero, dc), at(m, dc), at(2.0 * m, dc));
        let tol = 1e-12 * (1.0 + m.norm()).powi(2) * 50.0;
        for a in 0..2 {
            prop_assert!(k0.k2[a].norm() < tol);
            for b in 0..2 {
                let affine = k2.k1[a][b] - 2.0 * k1.k1[a][b] + k0.k1[a][b];
                prop_assert!(affine.norm() < tol);
            }
        }
        let half = C64::new(-0.5, 0.0);
        let (h1, hm) = (at(C64::new(1.0, 0.0), half), at(m, half));
        for a in 0..2 {
            prop_assert!((hm.k2[a] - m * m * h1.k2[a]).norm() < tol);
            for b in 0..2 {
                prop_assert!((hm.k1[a][b] + geom.ricci()[a][b]).norm() < tol);
            }
        }
    }
}

#[test]
fn audit_rows_match_or_carry_both_values() {
    let w = Weierstrass::new(PeriodLattice::new(C64::new(1.0, 0.0), C64::new(0.2, 1.1)).unwrap())
        .unwrap();
    let spec = PlantSpec {
        c_over_d: [C64::new(0.7, 0.3), C64::new(-0.4, 0.9), C64::new(1.3, -0.2)],
        anchor: None,
        metric_seed: 11,
        metric_spread: 0.3,
    };
    let p = plant(&w, &spec).unwrap();
    let opts = SequenceOptions {
        anchor: Some(p.anchor),
        stages: p.stages.to_vec(),
        ..SequenceOptions::default()
    };
    let plan = run_sequence(&p.geometry, &w, &opts).unwrap();
    let audit = formula_audit(&plan, &w, plan.anchor).unwrap();
    assert!(audit.complete);
    for row in &audit.rows {
        match row.status {
            AuditStatus::Match => assert!(row.rel_diff.unwrap() <= 1e-10, "{row:?}"),
            AuditStatus::Flagged => assert!(
                row.printed.is_some() && row.rel_diff.unwrap() > 1e-10,
                "{row:?}"
            ),
            AuditStatus::Unprinted => {
                assert!(row.printed.is_none() && row.quantity == "f4", "{row:?}")
            }
        }
    }
}
