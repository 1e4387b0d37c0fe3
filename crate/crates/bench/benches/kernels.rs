//! Dense-kernel benchmarks: SVD, Hermitian eigendecomposition, and the
//! matrix exponential at the dimensions the pipeline actually uses.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lcanon_core::eigen::eigh;
use lcanon_core::schatten::{schatten_norm, svd_schmidt};
use lcanon_core::semigroup::matrix_exp;
use lcanon_core::testing::{random_hermitian, random_operator, rng};

fn bench_svd(c: &mut Criterion) {
    let mut group = c.benchmark_group("svd");
    for d in [4usize, 8, 16, 32] {
        let x = random_operator(&mut rng(1), d, d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &x, |b, x| {
            b.iter(|| svd_schmidt(black_box(x)).unwrap())
        });
    }
    group.finish();
}

fn bench_eigh(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigh");
    for d in [4usize, 9, 16, 25] {
        let h = random_hermitian(&mut rng(2), d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &h, |b, h| {
            b.iter(|| eigh(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn bench_matrix_exp(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_exp");
    for d in [4usize, 9, 16] {
        let a = random_operator(&mut rng(3), d, d).into_data();
        group.bench_with_input(BenchmarkId::from_parameter(d), &a, |b, a| {
            b.iter(|| matrix_exp(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn bench_schatten_norm(c: &mut Criterion) {
    let x = random_operator(&mut rng(4), 16, 16);
    c.bench_function("schatten_norm_p1_d16", |b| {
        b.iter(|| schatten_norm(black_box(&x), 1.0).unwrap())
    });
}

criterion_group!(benches, bench_svd, bench_eigh, bench_matrix_exp, bench_schatten_norm);
criterion_main!(benches);
