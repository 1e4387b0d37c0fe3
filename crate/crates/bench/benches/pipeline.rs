//! Pipeline benchmarks: Choi transforms, Kraus extraction, and full
//! canonicalization of random generators.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lcanon_core::choi::choi_map;
use lcanon_core::gksl::{build_cp_generator, canonicalize, extract_initial_decomposition};
use lcanon_core::kraus::{kraus_from_choi, superop_from_kraus};
use lcanon_core::semigroup::check_semigroup;
use lcanon_core::testing::{random_kraus_set, random_operator, rng};
use lcanon_core::{Generator, Operator, Tolerances, WeightedBasis};
use num_complex::Complex64;

fn random_generator(seed: u64, d: usize) -> Generator {
    let mut r = rng(seed);
    let k = random_operator(&mut r, d, d);
    let ks = random_kraus_set(&mut r, d, 2);
    build_cp_generator(&k, &ks).unwrap()
}

fn bench_choi_map(c: &mut Criterion) {
    let mut group = c.benchmark_group("choi_map");
    for d in [2usize, 4, 8] {
        let ks = random_kraus_set(&mut rng(10), d, 2);
        let phi = superop_from_kraus(&ks);
        let wb = WeightedBasis::uniform(d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &phi, |b, phi| {
            b.iter(|| choi_map(black_box(phi), &wb).unwrap())
        });
    }
    group.finish();
}

fn bench_kraus_extraction(c: &mut Criterion) {
    let mut group = c.benchmark_group("kraus_from_choi");
    for d in [2usize, 4, 5] {
        let ks = random_kraus_set(&mut rng(11), d, d);
        let choi = choi_map(&superop_from_kraus(&ks), &WeightedBasis::uniform(d)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(d), &choi, |b, choi| {
            b.iter(|| kraus_from_choi(black_box(choi), 1e-12).unwrap())
        });
    }
    group.finish();
}

fn bench_extraction(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("extract_initial_decomposition");
    for d in [2usize, 3, 4] {
        let l = random_generator(12, d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &l, |b, l| {
            b.iter(|| extract_initial_decomposition(black_box(l), &tol).unwrap())
        });
    }
    group.finish();
}

fn bench_canonicalize(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("canonicalize");
    for d in [2usize, 3, 4] {
        let l = random_generator(13, d);
        let b_ref = Operator::identity(d).scaled(Complex64::new(0.5, 0.0));
        group.bench_with_input(BenchmarkId::from_parameter(d), &l, |b, l| {
            b.iter(|| canonicalize(black_box(l), &b_ref, &tol).unwrap())
        });
    }
    group.finish();
}

fn bench_semigroup_check(c: &mut Criterion) {
    let l = random_generator(14, 2);
    let grid: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
    c.bench_function("check_semigroup_d2_11pts", |b| {
        b.iter(|| check_semigroup(black_box(&l), &grid, 1e-9).unwrap())
    });
}

criterion_group!(
    benches,
    bench_choi_map,
    bench_kraus_extraction,
    bench_extraction,
    bench_canonicalize,
    bench_semigroup_check
);
criterion_main!(benches);
