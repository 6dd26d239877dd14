use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use marginal_choice::generators::{random_full_support_mu, rng};
use marginal_choice::prelude::*;
use marginal_choice_bench::{availability_instance, ircs_dataset, luce_dataset, rum_dataset};

fn games(c: &mut Criterion) {
    let mut group = c.benchmark_group("game");
    for n in [4, 8, 12] {
        let mu = random_full_support_mu(&mut rng(3), n);
        group.bench_with_input(BenchmarkId::new("zeta_mobius", n), &mu, |b, mu| {
            b.iter(|| mobius(&game_from_mu(black_box(mu))))
        });
    }
    group.finish();
}

fn rationalizability(c: &mut Criterion) {
    let mut group = c.benchmark_group("rationalize");
    for n in [3, 5, 7] {
        let data = rum_dataset(n, 5);
        let v = game_from_mu(&data.mu);
        group.bench_with_input(BenchmarkId::new("core", n), &data, |b, d| {
            b.iter(|| core_contains(&v, black_box(&d.lambda)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("flow", n), &data, |b, d| {
            b.iter(|| rationalize(black_box(d)))
        });
    }
    for n in [3, 4, 5] {
        let data = rum_dataset(n, 7);
        group.bench_with_input(BenchmarkId::new("rum", n), &data, |b, d| {
            b.iter(|| rum_rationalize(black_box(d), OrderCap::default()).unwrap())
        });
    }
    group.finish();
}

fn recovery(c: &mut Criterion) {
    let mut group = c.benchmark_group("recover");
    for n in [3, 6] {
        let data = luce_dataset(n, 11);
        group.bench_with_input(BenchmarkId::new("luce", n), &data, |b, d| {
            b.iter(|| luce_invert(black_box(d)).unwrap())
        });
    }
    for n in [3, 5] {
        let data = ircs_dataset(n, 13);
        group.bench_with_input(BenchmarkId::new("ircs", n), &data, |b, d| {
            b.iter(|| ircs_rationalize(black_box(d), OrderCap::default()).unwrap())
        });
    }
    for n in [4, 8] {
        let (xi, lambda) = availability_instance(n, 17);
        group.bench_function(BenchmarkId::new("availability", n), |b| {
            b.iter(|| construct_mu(black_box(&xi), black_box(&lambda)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, games, rationalizability, recovery);
criterion_main!(benches);
