use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use wishprod_core::freeprob::{global_density, solve_stieltjes};

fn stieltjes(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_stieltjes");
    for (r, s) in [(1, 0), (2, 1), (3, 2)] {
        let z = Complex64::new(1.5, 1e-3);
        g.bench_with_input(BenchmarkId::from_parameter(format!("r{r}s{s}")), &z, |b, z| {
            b.iter(|| solve_stieltjes(r, s, black_box(*z)))
        });
    }
    g.finish();
    c.bench_function("global_density r=2 s=1", |b| b.iter(|| global_density(2, 1, black_box(0.8))));
}

criterion_group!(benches, stieltjes);
criterion_main!(benches);
