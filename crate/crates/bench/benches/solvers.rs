use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lotto_bench::{monetary_cases, stage2_instance};
use lotto_core::{
    optimal_investment, solve_numeric, solve_partition_closed, spe_payoff, stackelberg_equilibrium,
};

fn closed_forms(c: &mut Criterion) {
    c.bench_function("spe_payoff", |b| {
        b.iter(|| spe_payoff(black_box(1.0), black_box(0.5), black_box(1.3)))
    });
    c.bench_function("optimal_investment", |b| {
        b.iter(|| optimal_investment(black_box(4.0 / 3.0), black_box(0.423), black_box(1.0)))
    });
}

fn stage2(c: &mut Criterion) {
    let mut group = c.benchmark_group("stage2");
    for n in [1, 5, 20, 100] {
        let (p, cfg) = stage2_instance(n);
        group.bench_with_input(BenchmarkId::new("closed", n), &n, |b, _| {
            b.iter(|| solve_partition_closed(black_box(&p), black_box(&cfg)))
        });
        group.bench_with_input(BenchmarkId::new("numeric", n), &n, |b, _| {
            b.iter(|| solve_numeric(black_box(&p), black_box(&cfg)))
        });
    }
    group.finish();
}

fn stackelberg(c: &mut Criterion) {
    let mut group = c.benchmark_group("stackelberg");
    for (name, params) in monetary_cases() {
        group.bench_function(name, |b| {
            b.iter(|| stackelberg_equilibrium(black_box(&params)))
        });
    }
    group.finish();
}

criterion_group!(benches, closed_forms, stage2, stackelberg);
criterion_main!(benches);
