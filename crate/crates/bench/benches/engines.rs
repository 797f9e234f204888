use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num::BigRational;
use recmeth_core::lattice::{compose_minimal, min_rep_size, oracle, subadditive_sweep, WeightSpec};
use recmeth_core::lrc::{build_example_code, compute_t, shorten, BoundParams};
use recmeth_core::perm::{moment_table, sample_cycles, stirling_distribution};

fn lrc(c: &mut Criterion) {
    let params = BoundParams { n: 131, k: 10, theta: 130, tau: 3, r: 3, q: 2, linear: true };
    c.bench_function("bound/example_params", |b| b.iter(|| compute_t(black_box(params)).unwrap()));
    c.bench_function("example/k8", |b| b.iter(|| build_example_code(black_box(8)).unwrap()));
    let ex = build_example_code(8).unwrap();
    c.bench_function("shorten/example_k8", |b| b.iter(|| shorten(&ex.code, &ex.locality).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let half = BigRational::new(1.into(), 2.into());
    let shell = WeightSpec::Shell.lattice(32, 2).unwrap();
    c.bench_function("min_rep/shell_32x32", |b| b.iter(|| min_rep_size(&shell, &half).unwrap()));
    c.bench_function("compose/shell_32_r5", |b| b.iter(|| compose_minimal(&shell, 5, &half).unwrap()));
    let small = WeightSpec::Shell.lattice(4, 2).unwrap();
    c.bench_function("oracle/brute_4x4", |b| b.iter(|| oracle::brute_force_min_rep(&small, &half).unwrap()));
    c.bench_function("sweep/shell_to_16", |b| {
        b.iter(|| subadditive_sweep(&WeightSpec::Shell, &half, 2, &[2, 4, 8, 16], true).unwrap())
    });
}

fn perm(c: &mut Criterion) {
    c.bench_function("moments/100x4", |b| b.iter(|| moment_table(black_box(100), 4).unwrap()));
    c.bench_function("stirling/n60", |b| b.iter(|| stirling_distribution(black_box(60)).unwrap()));
    c.bench_function("sample/n100_20k", |b| b.iter(|| sample_cycles(100, 20_000, 42).unwrap()));
}

criterion_group!(benches, lrc, lattice, perm);
criterion_main!(benches);
