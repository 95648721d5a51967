use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rp2_bench::{normal_form, scrambled};
use rp2_core::fuzz::random_tuple;
use rp2_core::{apply_move, invariants, random_move, realize, validate};

const SIZES: [usize; 3] = [1, 3, 5];

fn bench_invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariants");
    for n in SIZES {
        let d = scrambled(n, 10);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| b.iter(|| invariants(black_box(d)).unwrap()));
    }
    g.finish();
}

fn bench_validate(c: &mut Criterion) {
    let mut g = c.benchmark_group("validate");
    for n in SIZES {
        let d = scrambled(n, 10);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| b.iter(|| validate(black_box(d)).is_ok()));
    }
    g.finish();
}

fn bench_realize(c: &mut Criterion) {
    let mut g = c.benchmark_group("realize");
    for n in SIZES {
        let t = random_tuple(n, 7).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| b.iter(|| realize(black_box(t)).unwrap()));
    }
    g.finish();
}

fn bench_random_move(c: &mut Criterion) {
    let mut g = c.benchmark_group("random_move");
    for n in SIZES {
        let d = normal_form(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                let m = random_move(d, seed).unwrap();
                apply_move(d, &m).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = bench_invariants, bench_validate, bench_realize, bench_random_move
}
criterion_main!(benches);
