//! Vertex series and eigenfunction checks.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flagvertex::quiver::enumerate_fixed_points;
use flagvertex::trs::check_eigen;
use flagvertex::vertex::vertex_series;
use flagvertex::{Insertion, SeriesConvention};
use flagvertex_bench::{flags, series_point};

fn vertex(c: &mut Criterion) {
    let mut g = c.benchmark_group("vertex_series");
    g.sample_size(10);
    for (label, flag) in flags() {
        let order = if flag.v.len() == 1 { 4 } else { 2 };
        let params = series_point(flag.w, order);
        let p = enumerate_fixed_points(&flag)[0].clone();
        let ord = vec![order as i64; flag.v.len()];
        g.bench_with_input(BenchmarkId::from_parameter(label), &ord, |b, ord| {
            b.iter(|| vertex_series(&p, &Insertion::one(), ord, &params, SeriesConvention::Zh).expect("series"))
        });
    }
    g.finish();
}

fn trs(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_eigen");
    g.sample_size(10);
    for (label, flag) in flags() {
        let ord = vec![2i64; flag.v.len()];
        let params = series_point(flag.w, 2 + 2);
        let p = enumerate_fixed_points(&flag)[0].clone();
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| check_eigen(&flag, &p, 1, &ord, &params).expect("check"))
        });
    }
    g.finish();
}

criterion_group!(benches, vertex, trs);
criterion_main!(benches);
