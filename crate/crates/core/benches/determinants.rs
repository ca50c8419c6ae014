use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use structdet::closedform::{cauchy_det_closed, hilbert_det_closed};
use structdet::exactcore::det_bareiss_with;
use structdet::families::{build_cauchy, build_hilbert, integer_cauchy_nodes};
use structdet::verifier::{run_suite, Suite, SuiteConfig};
use structdet::Execution;

fn closed_vs_elimination(c: &mut Criterion) {
    let mut group = c.benchmark_group("cauchy_det");
    group.sample_size(10);
    for n in [10usize, 25, 50] {
        let (xs, ys) = integer_cauchy_nodes(n);
        let m = build_cauchy(&xs, &ys).unwrap();
        group.bench_with_input(BenchmarkId::new("closed-form", n), &n, |b, _| {
            b.iter(|| cauchy_det_closed(black_box(&xs), black_box(&ys)).unwrap().derived_value())
        });
        group.bench_with_input(BenchmarkId::new("bareiss-seq", n), &n, |b, _| {
            b.iter(|| det_bareiss_with(black_box(&m), Execution::Sequential).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bareiss-par", n), &n, |b, _| {
            b.iter(|| det_bareiss_with(black_box(&m), Execution::Parallel).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("hilbert_det");
    group.sample_size(10);
    for n in [10usize, 25, 50] {
        let h = build_hilbert(n);
        group.bench_with_input(BenchmarkId::new("closed-form", n), &n, |b, &n| {
            b.iter(|| hilbert_det_closed(black_box(n)))
        });
        group.bench_with_input(BenchmarkId::new("bareiss-seq", n), &n, |b, _| {
            b.iter(|| det_bareiss_with(black_box(&h), Execution::Sequential).unwrap())
        });
    }
    group.finish();
}

fn sweep_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("theorem_sweep");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let cfg = SuiteConfig { seed: 1, max_n: Some(9), exec, ..Default::default() };
        group.bench_function(name, |b| b.iter(|| run_suite(Suite::Theorem, black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, closed_vs_elimination, sweep_modes);
criterion_main!(benches);
