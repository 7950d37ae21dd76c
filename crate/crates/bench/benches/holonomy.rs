use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use holonomy_bench::{circle_two_arcs, flat_torus_gerbe, monopole_equator};
use holonomy_core::gerbe::{surface_holonomy_canonical, sweep_assignments};
use holonomy_core::local::{globalise, pair_atlas, MAX_RULES};
use holonomy_core::quadrature::Quadrature;
use holonomy_core::transport::transport;

fn monopole_transport(c: &mut Criterion) {
    let q = Quadrature::default();
    let mut group = c.benchmark_group("monopole equator transport");
    for n in 1..=3 {
        let (b, p) = monopole_equator(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| transport(&b, &p, &q).unwrap())
        });
    }
    group.finish();
}

fn surface_holonomy(c: &mut Criterion) {
    let mut group = c.benchmark_group("flat torus surface holonomy");
    for m in [2, 4, 8] {
        let (g, s) = flat_torus_gerbe(m, m, 1, 3);
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |bench, _| {
            bench.iter(|| surface_holonomy_canonical(&g, &s).unwrap())
        });
    }
    group.finish();
}

fn assignment_sweep(c: &mut Criterion) {
    let (g, s) = flat_torus_gerbe(2, 2, 2, 5);
    let mut group = c.benchmark_group("assignment sweep");
    group.sample_size(10);
    group.bench_function("2x2 torus", |bench| bench.iter(|| sweep_assignments(&g, &s, u64::MAX).unwrap()));
    group.finish();
}

fn globalisation(c: &mut Criterion) {
    let mut group = c.benchmark_group("globalise circle");
    for n in [8, 16, 32] {
        let s = pair_atlas(&circle_two_arcs(n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| globalise(&s, MAX_RULES).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monopole_transport, surface_holonomy, assignment_sweep, globalisation);
criterion_main!(benches);
