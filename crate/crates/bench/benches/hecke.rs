use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use klwb_bench::group;
use klwb_core::hecke::{Convention, HeckeAlgebra};

fn kl_basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("kl_basis");
    for t in ["A2", "B2", "G2", "A3", "B3"] {
        let w = group(t);
        g.bench_with_input(BenchmarkId::from_parameter(t), &w, |b, w| {
            b.iter(|| HeckeAlgebra::new(w.clone()).kl_basis().len())
        });
    }
    g.finish();
}

fn cells(c: &mut Criterion) {
    let mut g = c.benchmark_group("cells");
    g.sample_size(10);
    for t in ["B2", "A3"] {
        let w = group(t);
        g.bench_with_input(BenchmarkId::from_parameter(t), &w, |b, w| {
            b.iter(|| HeckeAlgebra::new(w.clone()).cells().cells.len())
        });
    }
    g.finish();
}

fn full_twist(c: &mut Criterion) {
    let h = HeckeAlgebra::new(group("A3"));
    c.bench_function("full_twist A3", |b| b.iter(|| h.full_twist(Convention::Ly)));
}

criterion_group!(benches, kl_basis, cells, full_twist);
criterion_main!(benches);
