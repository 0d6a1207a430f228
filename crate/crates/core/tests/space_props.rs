use ifp_core::fixtures::{self, GeneratedKind, InstanceGenerator};
use ifp_core::space::{
    check_ifm_axioms, grand_triangle_check, induced_from_metric, AxiomOptions, MetricScheme,
};
use ifp_core::{FiniteInstance, PointId, TConorm, TNorm};
use proptest::prelude::*;

fn pairwise_invariants(inst: &FiniteInstance) -> Result<(), TestCaseError> {
    let grid = inst.t_grid();
    for x in inst.ids() {
        for y in inst.ids() {
            for &t in grid {
                prop_assert_eq!(inst.mu(x, y, t), inst.mu(y, x, t));
                prop_assert_eq!(inst.nu(x, y, t), inst.nu(y, x, t));
                prop_assert!(inst.mu(x, y, t) + inst.nu(x, y, t) <= 1.0 + 1e-12);
            }
            for w in grid.windows(2) {
                prop_assert!(inst.mu(x, y, w[0]) <= inst.mu(x, y, w[1]));
                prop_assert!(inst.nu(x, y, w[0]) >= inst.nu(x, y, w[1]));
            }
        }
    }
    Ok(())
}

/// All paths of `len` points.
fn paths(n: usize, len: usize) -> Vec<Vec<PointId>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p: Vec<PointId>| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(PointId(i));
                    q
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn induced_standard_metrics_pass(seed in any::<u64>(), n in 1usize..=6) {
        let mut generator = InstanceGenerator::new(seed);
        let dist = generator.euclidean(n);
        let labels = (0..n).map(|i| format!("x{i}")).collect();
        let inst = induced_from_metric(
            labels,
            dist,
            MetricScheme::Standard,
            TNorm::minimum(),
            TConorm::maximum(),
            fixtures::STANDARD_T_GRID.to_vec(),
        ).unwrap();
        let report = check_ifm_axioms(&inst, &AxiomOptions::new(1e-12));
        prop_assert!(report.all_pass(), "{:?}", report);
        pairwise_invariants(&inst)?;
    }

    #[test]
    fn induced_exponential_metrics_pass(seed in any::<u64>(), n in 1usize..=6) {
        let mut generator = InstanceGenerator::new(seed);
        let inst = generator.instance_of(GeneratedKind::Exponential, n);
        prop_assert!(check_ifm_axioms(&inst, &AxiomOptions::new(1e-12)).all_pass());
        pairwise_invariants(&inst)?;
    }

    #[test]
    fn grand_triangle_on_generated_instances(seed in any::<u64>()) {
        let mut generator = InstanceGenerator::new(seed);
        let inst = generator.instance(5);
        let n = inst.len();
        for len in 2..=4 {
            for path in paths(n, len) {
                for &t in inst.t_grid() {
                    let g = grand_triangle_check(&inst, &path, t, 1e-12).unwrap();
                    prop_assert!(g.holds, "{:?} {:?}", path, g);
                }
            }
        }
    }
}

#[test]
fn grand_triangle_on_fixtures() {
    for inst in [fixtures::u3(), fixtures::e3(), fixtures::s5(), fixtures::u4()] {
        for len in 2..=4 {
            for path in paths(inst.len(), len) {
                for t in [0.1, 1.0, 3.0] {
                    assert!(grand_triangle_check(&inst, &path, t, 1e-12).unwrap().holds);
                }
            }
        }
    }
}

#[test]
fn fixture_invariants() {
    for inst in [fixtures::u3(), fixtures::e3(), fixtures::u4(), fixtures::s5().with_t_grid(vec![0.25, 1.0, 4.0]).unwrap()] {
        pairwise_invariants(&inst).unwrap();
    }
}
