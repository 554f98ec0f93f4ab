use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wishprod_bench::{ensemble, hard_kernel};
use wishprod_core::finite_kernel::{kernel_n, kernel_n_contour};
use wishprod_core::hard_edge::HardEdgeParams;

fn hard_edge(c: &mut Criterion) {
    let mut g = c.benchmark_group("k_hard");
    for nu in [vec![0], vec![0, 0], vec![0, 0, 0]] {
        let k = hard_kernel(&nu);
        g.bench_with_input(BenchmarkId::new("cached", nu.len()), &k, |b, k| {
            b.iter(|| k.kernel(black_box(1.3), black_box(2.1)))
        });
    }
    let p = HardEdgeParams::new(vec![0, 0]).unwrap();
    g.bench_function("cold r=2", |b| b.iter(|| wishprod_core::hard_edge::k_hard(&p, black_box(1.3), black_box(2.1))));
    g.finish();
}

fn finite(c: &mut Criterion) {
    let p = ensemble(10, &[0, 1], &[0]);
    let mut g = c.benchmark_group("kernel_n");
    g.bench_function("biorth_sum", |b| b.iter(|| kernel_n(&p, black_box(0.7), black_box(1.1))));
    g.sample_size(20);
    g.bench_function("double_contour", |b| b.iter(|| kernel_n_contour(&p, black_box(0.7), black_box(1.1))));
    g.finish();
}

criterion_group!(benches, hard_edge, finite);
criterion_main!(benches);
