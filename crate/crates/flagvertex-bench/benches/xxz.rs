//! XXZ operators, identity suite and Bethe solver.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flagvertex::bethe::{solve, BetheProblem};
use flagvertex::kernel::{int, rat};
use flagvertex::xxz::{identity_suite, transfer_matrix};
use flagvertex_bench::xxz_point;

fn transfer(c: &mut Criterion) {
    let mut g = c.benchmark_group("transfer_matrix");
    g.sample_size(10);
    for (n, w) in [(2, 2), (2, 4), (3, 3)] {
        let params = xxz_point(n, w);
        g.bench_function(BenchmarkId::from_parameter(format!("n{n}w{w}")), |b| {
            b.iter(|| transfer_matrix(&rat(7, 3), &params, n).expect("transfer matrix"))
        });
    }
    g.finish();
}

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("identity_suite");
    g.sample_size(10);
    for (n, w) in [(2, 2), (2, 3)] {
        let params = xxz_point(n, w);
        g.bench_function(BenchmarkId::from_parameter(format!("n{n}w{w}")), |b| {
            b.iter(|| identity_suite("all", n, &params, 7).expect("suite"))
        });
    }
    g.finish();
}

fn bethe(c: &mut Criterion) {
    let mut g = c.benchmark_group("bethe_solve");
    g.sample_size(10);
    let p = BetheProblem::with_hbar(rat(9, 4), vec![int(2), rat(-3, 2), rat(5, 3)], vec![int(1), rat(5, 2)], vec![1, 2], 50)
        .expect("problem");
    g.bench_function("w3_weight12_50digits", |b| b.iter(|| solve(&p, 50, 11).expect("solutions")));
    g.finish();
}

criterion_group!(benches, transfer, suite, bethe);
criterion_main!(benches);
