use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use wishprod_bench::meijer_fixture;
use wishprod_core::specfun::{bessel_j, ln_gamma, meijer_g, MellinBarnes};

fn gamma(c: &mut Criterion) {
    let z = Complex64::new(3.7, -12.5);
    c.bench_function("ln_gamma complex", |b| b.iter(|| ln_gamma(black_box(z))));
    c.bench_function("ln_gamma reflected", |b| b.iter(|| ln_gamma(black_box(Complex64::new(-4.3, 0.8)))));
}

fn meijer(c: &mut Criterion) {
    let (spec, contour) = meijer_fixture();
    c.bench_function("meijer_g one-shot", |b| b.iter(|| meijer_g(&spec, &contour, black_box(2.5))));
    let mb = MellinBarnes::with_contour(spec, &contour).unwrap();
    c.bench_function("meijer_g cached nodes", |b| b.iter(|| mb.eval(black_box(2.5))));
}

fn bessel(c: &mut Criterion) {
    c.bench_function("bessel_j series", |b| b.iter(|| bessel_j(black_box(1.0), black_box(4.0))));
    c.bench_function("bessel_j integral", |b| b.iter(|| bessel_j(black_box(1.0), black_box(60.0))));
}

criterion_group!(benches, gamma, meijer, bessel);
criterion_main!(benches);
