use std::collections::VecDeque;

use ifp_core::analysis::{
    convergence_check, limit_transport_check, sequential_continuity_check, standard_eps_grid,
    uniform_continuity_modulus,
};
use ifp_core::fixtures::{self, InstanceGenerator};
use ifp_core::maps::{
    enumerate_contractive_maps, fixed_points, is_locally_contractive, DEFAULT_ENUM_CAP,
};
use ifp_core::solvers::{
    build_chain, chain_solve, picard_solve, power_solve, EvalAt, GEOMETRIC_BOUND_SLACK,
};
use ifp_core::{Error, FiniteInstance, PointId, SelfMap, SolveReport, SolverConfig};
use proptest::prelude::*;
use rand::Rng;

fn all_sequences(n: usize, len: usize) -> Vec<Vec<PointId>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s: Vec<PointId>| {
                (0..n).map(move |i| {
                    let mut q = s.clone();
                    q.push(PointId(i));
                    q
                })
            })
            .collect();
    }
    out
}

fn eventually_constant_at(seq: &[PointId], x: PointId) -> bool {
    seq.len() >= 2 && seq[seq.len() - 2..].iter().all(|&p| p == x)
}

fn geometric_bound_holds(report: &SolveReport, k: f64) -> bool {
    let (Some(mu0), Some(nu0)) = (report.residual_mu.first(), report.residual_nu.first()) else {
        return true;
    };
    report.residual_mu.iter().zip(&report.residual_nu).enumerate().all(|(n, (mus, nus))| {
        let kn = k.powi(n as i32);
        (0..mus.len()).all(|j| {
            mus[j] >= (mu0[j] / kn).min(1.0) - GEOMETRIC_BOUND_SLACK
                && nus[j] <= kn * nu0[j] + GEOMETRIC_BOUND_SLACK
        })
    })
}

#[test]
fn convergence_is_eventual_constancy() {
    for inst in [fixtures::u3(), fixtures::u4(), fixtures::e3()] {
        for len in 1..=5 {
            for seq in all_sequences(inst.len(), len) {
                for x in inst.ids() {
                    let v = convergence_check(&inst, &seq, x, 1e-9).unwrap();
                    let padded = if seq.len() == 1 { vec![seq[0], seq[0]] } else { seq.clone() };
                    assert_eq!(v.holds, eventually_constant_at(&padded, x), "{seq:?} -> {x:?}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn limit_transport_on_eventually_constant_pairs(seed in any::<u64>()) {
        let mut generator = InstanceGenerator::new(seed);
        let inst = generator.instance(5);
        let len = generator.rng().random_range(2..8);
        let xs = generator.eventually_constant(&inst, len);
        let ys = generator.eventually_constant(&inst, len);
        let (x, y) = (*xs.last().unwrap(), *ys.last().unwrap());
        let xs = [xs, vec![x]].concat();
        let ys = [ys, vec![y]].concat();
        let v = limit_transport_check(&inst, &xs, &ys, x, y, 1e-12).unwrap();
        prop_assert!(v.holds);
        prop_assert_eq!(v.max_deviation(), 0.0);
    }

    #[test]
    fn certified_maps_are_sequentially_continuous(seed in any::<u64>()) {
        let mut generator = InstanceGenerator::new(seed);
        let inst = generator.instance(4);
        for map in enumerate_contractive_maps(&inst, 0.9, DEFAULT_ENUM_CAP).unwrap() {
            let table = uniform_continuity_modulus(&inst, &map, &standard_eps_grid()).unwrap();
            prop_assert!(table.is_complete());
            for _ in 0..5 {
                let xs = generator.eventually_constant(&inst, 6);
                let x = *xs.last().unwrap();
                let xs = [xs, vec![x]].concat();
                prop_assert!(sequential_continuity_check(&inst, &map, &xs, x, 1e-9).unwrap().holds);
            }
        }
    }

    #[test]
    fn picard_agrees_with_oracle_and_bound(seed in any::<u64>()) {
        let mut generator = InstanceGenerator::new(seed);
        let inst = generator.instance(4);
        for map in enumerate_contractive_maps(&inst, 0.9, DEFAULT_ENUM_CAP).unwrap() {
            let fixed = fixed_points(&inst, &map).unwrap();
            prop_assert_eq!(fixed.len(), 1);
            for x0 in inst.ids() {
                let config = SolverConfig::new(x0);
                let report = picard_solve(&inst, &map, &config, None).unwrap();
                let p = report.fixed_point.unwrap();
                prop_assert!(fixed.contains(&p));
                prop_assert!(geometric_bound_holds(&report, report.k.unwrap()));
                let power = power_solve(&inst, &map, &config.clone().with_m(2), None).unwrap();
                prop_assert_eq!(power.fixed_point, Some(p));
            }
        }
    }
}

/// Shortest valid chain length by exhaustive BFS over simple paths.
fn brute_shortest(inst: &FiniteInstance, a: PointId, b: PointId, eta: f64, t: f64) -> Option<usize> {
    let ok = |u: PointId, v: PointId| {
        inst.mu(u, v, t) > eta && inst.nu(u, v, t) < 1.0 - eta && inst.mu(v, u, t) > eta && inst.nu(v, u, t) < 1.0 - eta
    };
    let mut queue = VecDeque::from([vec![a]]);
    while let Some(path) = queue.pop_front() {
        let last = *path.last().unwrap();
        if last == b {
            return Some(path.len());
        }
        for v in inst.ids() {
            if !path.contains(&v) && ok(last, v) {
                let mut next = path.clone();
                next.push(v);
                queue.push_back(next);
            }
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn chains_are_valid_and_shortest(seed in any::<u64>(), eta in 0.05..0.95f64) {
        let mut generator = InstanceGenerator::new(seed);
        let inst = generator.instance(6);
        for a in inst.ids() {
            for b in inst.ids() {
                let expected = brute_shortest(&inst, a, b, eta, 1.0);
                match build_chain(&inst, a, b, eta, EvalAt::At(1.0)) {
                    Ok(chain) => {
                        prop_assert_eq!(Some(chain.points.len()), expected);
                        for w in chain.points.windows(2) {
                            prop_assert!(inst.mu(w[0], w[1], 1.0) > eta);
                            prop_assert!(inst.nu(w[0], w[1], 1.0) < 1.0 - eta);
                        }
                    }
                    Err(Error::NotChainable { .. }) => prop_assert_eq!(expected, None),
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
            }
        }
    }
}

#[test]
fn chain_solve_step_invariant_on_s5() {
    let s5 = fixtures::s5();
    let n = s5.len();
    let mut runs = 0;
    for code in 0..n.pow(n as u32) {
        let images = (0..n).map(|i| PointId(code / n.pow((n - 1 - i) as u32) % n)).collect();
        let map = SelfMap::new("m", images);
        for lambda in [0.5, 0.6, 0.7, 0.8, 0.9] {
            if !is_locally_contractive(&s5, &map, 0.5, lambda).unwrap().is_certified() {
                continue;
            }
            for x0 in s5.ids() {
                let r = chain_solve(&s5, &map, 0.5, lambda, &SolverConfig::new(x0), 1.0).unwrap();
                assert!(fixed_points(&s5, &map).unwrap().contains(&r.fixed_point.unwrap()));
                runs += 1;
            }
        }
    }
    assert!(runs > 0);
}
