use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hodge_bench::{biextension, deligne_system, sample_points, TOL};
use hodge_core::dilog::bloch_wigner;
use hodge_core::height::height;
use hodge_core::limits::{deligne_system_grading, relative_weight_filtration};
use hodge_core::mhs::deligne_bigrading;
use hodge_core::random::random_hodge_tate;
use hodge_core::real::{cx, DoubleDouble};
use hodge_core::splitting::{delta_via_log, splitting_from_bigrading};
use hodge_core::variations::{height_sweep, ray};

fn dilog(c: &mut Criterion) {
    let points = sample_points(256, 1);
    let wide: Vec<_> = points.iter().map(|z| cx(DoubleDouble::from_f64(z.re), DoubleDouble::from_f64(z.im))).collect();
    let mut g = c.benchmark_group("bloch_wigner");
    g.bench_function("f64 x256", |b| b.iter(|| points.iter().map(|&z| bloch_wigner::<f64>(black_box(z))).sum::<f64>()));
    g.bench_function("double-double x256", |b| {
        b.iter(|| wide.iter().map(|&z| bloch_wigner::<DoubleDouble>(black_box(z))).fold(DoubleDouble::from_f64(0.0), |a, x| a + x))
    });
    g.finish();
}

fn splitting(c: &mut Criterion) {
    let mut g = c.benchmark_group("splitting");
    for dim in [3, 6, 9] {
        let h = biextension(dim, dim as u64);
        let b = deligne_bigrading(&h.mhs).unwrap();
        g.bench_with_input(BenchmarkId::new("bigrading", dim), &h, |bench, h| bench.iter(|| deligne_bigrading(&h.mhs).unwrap()));
        g.bench_with_input(BenchmarkId::new("delta fixed point", dim), &b, |bench, b| {
            bench.iter(|| splitting_from_bigrading(b, TOL).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("delta via log", dim), &b, |bench, b| bench.iter(|| delta_via_log(b, TOL).unwrap()));
        g.bench_with_input(BenchmarkId::new("height", dim), &h, |bench, h| bench.iter(|| height(h).unwrap()));
    }
    g.finish();
}

fn limits(c: &mut Criterion) {
    let mut g = c.benchmark_group("limits");
    for dim in [4, 6] {
        let s = deligne_system(dim, 3);
        let y = s.y.to_complex::<f64>();
        g.bench_with_input(BenchmarkId::new("relative weight", dim), &s, |b, s| {
            b.iter(|| relative_weight_filtration(&s.n, &s.w).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("deligne system", dim), &s, |b, s| {
            b.iter(|| deligne_system_grading(&s.w, &s.n, &y, TOL).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let v = random_hodge_tate::<f64>(&[1, 2, 1], 2, 7, TOL).unwrap();
    let ys: Vec<f64> = (1..=32).map(f64::from).collect();
    let path = ray(2, 0.25, &ys);
    c.bench_function("height sweep 32 points", |b| b.iter(|| height_sweep(&v, &path).unwrap()));
}

criterion_group!(benches, dilog, splitting, limits, sweep);
criterion_main!(benches);
