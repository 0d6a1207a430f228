use ifp_core::algebra::{
    check_operation_axioms, find_idempotent_witness, find_residual_witness, Law, MeshTable,
};
use ifp_core::{TConorm, TNorm, UnitOperation};
use proptest::prelude::*;

fn tnorms() -> Vec<TNorm> {
    vec![TNorm::minimum(), TNorm::product(), TNorm::lukasiewicz()]
}

fn tconorms() -> Vec<TConorm> {
    vec![TConorm::maximum(), TConorm::probabilistic_sum(), TConorm::lukasiewicz()]
}

fn laws_hold<O: UnitOperation>(op: &O, a: f64, b: f64, c: f64) -> Result<(), TestCaseError> {
    let e = op.identity();
    let f = |x, y| op.eval(x, y);
    prop_assert_eq!(f(a, e), a);
    prop_assert_eq!(f(e, a), a);
    prop_assert_eq!(f(a, b), f(b, a));
    let (lo, hi) = if a <= c { (a, c) } else { (c, a) };
    prop_assert!(f(lo, b) <= f(hi, b));
    prop_assert!((f(f(a, b), c) - f(a, f(b, c))).abs() <= 1e-15);
    let v = f(a, b);
    prop_assert!((0.0..=1.0).contains(&v));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn builtin_tnorm_laws(a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64) {
        for t in tnorms() {
            laws_hold(&t, a, b, c)?;
            prop_assert!(t.eval(a, b) <= a.min(b));
        }
    }

    #[test]
    fn builtin_tconorm_laws(a in 0.0..=1.0f64, b in 0.0..=1.0f64, c in 0.0..=1.0f64) {
        for s in tconorms() {
            laws_hold(&s, a, b, c)?;
            prop_assert!(s.eval(a, b) >= a.max(b));
        }
    }
}

proptest! {
    #[test]
    fn fold_is_order_insensitive(values in prop::collection::vec(0.0..=1.0f64, 1..12)) {
        let reversed: Vec<f64> = values.iter().rev().copied().collect();
        let tol = 1e-15 * values.len() as f64;
        for t in tnorms() {
            prop_assert!((t.fold(&values).unwrap() - t.fold(&reversed).unwrap()).abs() <= tol);
        }
        for s in tconorms() {
            prop_assert!((s.fold(&values).unwrap() - s.fold(&reversed).unwrap()).abs() <= tol);
        }
    }

    #[test]
    fn out_of_range_arguments_are_rejected(a in 1.0001..10.0f64, b in 0.0..=1.0f64) {
        for t in tnorms() {
            prop_assert!(t.apply(a, b).is_err());
            prop_assert!(t.apply(b, -a).is_err());
        }
        for s in tconorms() {
            prop_assert!(s.apply(a, b).is_err());
        }
    }
}

#[test]
fn builtin_law_reports_pass() {
    for t in tnorms() {
        let report = check_operation_axioms(&t, 0.05, 1e-12).unwrap();
        assert!(report.all_pass(), "{t}: {report:?}");
    }
    for s in tconorms() {
        let report = check_operation_axioms(&s, 0.05, 1e-12).unwrap();
        assert!(report.all_pass(), "{s}: {report:?}");
    }
}

#[test]
fn tables_of_builtins_pass() {
    let min_table = MeshTable::from_fn(0.1, f64::min).unwrap();
    let t = TNorm::custom(min_table, Some(true)).unwrap();
    let report = check_operation_axioms(&t, 0.1, 1e-9).unwrap();
    assert!(report.all_pass());
    assert!(report.idempotent);

    let prod_table = MeshTable::from_fn(0.1, |a, b| a * b).unwrap();
    let t = TNorm::custom(prod_table, None).unwrap();
    let report = check_operation_axioms(&t, 0.1, 1e-9).unwrap();
    assert!(report.check(Law::Associativity).passed);
    assert!(!report.idempotent);
}

#[test]
fn witnesses_revalidate_on_a_sweep() {
    for t in tnorms() {
        for s in tconorms() {
            for i in 3..=97 {
                let r5 = i as f64 / 100.0;
                let (r6, r7) = find_idempotent_witness(&t, &s, r5, 0.01).unwrap();
                assert!(t.apply(r6, r6).unwrap() >= r5);
                assert!(s.apply(r7, r7).unwrap() <= r5);
            }
            for i in 2..=98 {
                let r1 = i as f64 / 100.0 + 0.005;
                let r2 = r1 - 0.02;
                if r2 <= 0.0 {
                    continue;
                }
                let (r3, r4) = find_residual_witness(&t, &s, r1, r2, 0.01).unwrap();
                assert!(t.apply(r1, r3).unwrap() > r2);
                assert!(s.apply(r4, r2).unwrap() < r1);
            }
        }
    }
}
