//! Benchmarks the parallel execution mode against the sequential fallback
//! on the two embarrassingly parallel workloads: the exact identity suite
//! and the numeric certification of one case.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pseudotoric::models::build_chart;
use pseudotoric::models::Family;
use pseudotoric::numsym::{run_numeric_case, Tolerances};
use pseudotoric::symverify::{run_identity_suite, SuiteConfig};
use pseudotoric::ExecMode;

fn modes() -> [(&'static str, ExecMode); 2] {
    [
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ]
}

fn bench_identity_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("identity_suite");
    group.sample_size(10);
    for (name, mode) in modes() {
        let cfg = SuiteConfig {
            flag_sizes: vec![3, 4, 5],
            even_sizes: vec![2, 3, 4],
            odd_sizes: vec![2, 3, 4],
            mode,
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| {
            b.iter(|| run_identity_suite(cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_numeric_case(c: &mut Criterion) {
    let mut group = c.benchmark_group("numeric_case_flag3");
    group.sample_size(10);
    let chart = build_chart(Family::Flag, 3).unwrap();
    let d = chart.schubert_divisor();
    let tol = Tolerances::default();
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| run_numeric_case(&chart, d, 50, 1, &tol, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_identity_suite, bench_numeric_case);
criterion_main!(benches);
