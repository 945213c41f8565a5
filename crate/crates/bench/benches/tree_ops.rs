use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wrcomm_bench::{derived_target, random_pair, DEPTHS};
use wrcomm_core::solve_bk_derived;

fn multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiply");
    for depth in DEPTHS {
        let (g, h) = random_pair(depth, 7);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, _| {
            b.iter(|| black_box(&g) * black_box(&h))
        });
    }
    group.finish();
}

fn inverse(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse");
    for depth in DEPTHS {
        let (g, _) = random_pair(depth, 11);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, _| {
            b.iter(|| black_box(&g).inverse())
        });
    }
    group.finish();
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for depth in [8, 12, 16] {
        let w = derived_target(depth, 13);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, _| {
            b.iter(|| solve_bk_derived(black_box(&w)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, multiply, inverse, solve);
criterion_main!(benches);
