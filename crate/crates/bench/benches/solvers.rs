use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ifp_core::fixtures::{self, GeneratedKind, InstanceGenerator};
use ifp_core::maps::{enumerate_contractive_maps, min_contraction_constant, DEFAULT_ENUM_CAP};
use ifp_core::solvers::{build_chain, picard_solve, EvalAt};
use ifp_core::space::{check_ifm_axioms, AxiomOptions};
use ifp_core::{PointId, SelfMap, SolverConfig};

fn axioms(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_ifm_axioms");
    for n in [4, 8, 16] {
        let inst = InstanceGenerator::new(7).instance_of(GeneratedKind::Exponential, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| check_ifm_axioms(black_box(inst), &AxiomOptions::new(1e-12)))
        });
    }
    group.finish();
}

fn picard(c: &mut Criterion) {
    let mut group = c.benchmark_group("picard_solve");
    for n in [4, 16, 64] {
        let inst = InstanceGenerator::new(3).instance_of(GeneratedKind::Ultrametric, n);
        let map = SelfMap::new("constant", vec![PointId(0); n]);
        let config = SolverConfig::new(PointId(n - 1)).with_max_iter(10 * n);
        let k = min_contraction_constant(&inst, &map).unwrap().certifying_k().expect("certified");
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| picard_solve(black_box(inst), &map, &config, Some(k)))
        });
    }
    group.finish();
}

fn enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_contractive_maps");
    group.sample_size(20);
    for n in [3, 4, 5] {
        let inst = InstanceGenerator::new(11).instance_of(GeneratedKind::Exponential, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| enumerate_contractive_maps(black_box(inst), 0.9, DEFAULT_ENUM_CAP))
        });
    }
    group.finish();
}

fn chains(c: &mut Criterion) {
    let s5 = fixtures::s5();
    let (a, b) = (PointId(0), PointId(4));
    c.bench_function("build_chain/s5", |bench| {
        bench.iter(|| build_chain(black_box(&s5), a, b, 0.5, EvalAt::At(1.0)))
    });
}

criterion_group!(benches, axioms, picard, enumerate, chains);
criterion_main!(benches);
