use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use klwb_bench::group;
use klwb_core::klalgebra::KLModel;

fn orbit_mul(c: &mut Criterion) {
    let mut g = c.benchmark_group("orbit_mul");
    for t in ["A2", "B2", "G2"] {
        let m = KLModel::new(group(t), 6);
        // the generic orbit is the largest
        let o = (0..m.orbits().len()).max_by_key(|&o| m.orbits()[o].num_blocks()).unwrap();
        let w0 = m.word_of(m.group().longest());
        let a = m.project(&w0, o);
        g.bench_with_input(BenchmarkId::from_parameter(t), &a, |b, a| {
            b.iter(|| m.orbits()[o].mul(a, a).unwrap())
        });
    }
    g.finish();
}

fn model_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("model_build");
    g.sample_size(10);
    for t in ["A2", "G2", "A3"] {
        let w = group(t);
        g.bench_with_input(BenchmarkId::from_parameter(t), &w, |b, w| b.iter(|| KLModel::new(Arc::clone(w), 6)));
    }
    g.finish();
}

fn minpoly(c: &mut Criterion) {
    let mut g = c.benchmark_group("fulltwist_minpoly");
    g.sample_size(10);
    for t in ["A1", "A2", "B2"] {
        let w = group(t);
        g.bench_with_input(BenchmarkId::from_parameter(t), &w, |b, w| {
            b.iter(|| KLModel::new(Arc::clone(w), 6).fulltwist_minpoly())
        });
    }
    g.finish();
}

criterion_group!(benches, orbit_mul, model_build, minpoly);
criterion_main!(benches);
