use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cslp_bench::wide_fslp;
use cslp_core::fslp::FslpNav;
use std::hint::black_box;

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("nav_child");
    for k in [4, 10, 16] {
        let nav = FslpNav::new(wide_fslp(k)).unwrap();
        let root = nav.root_first(nav.grammar().start.unwrap()).unwrap().unwrap();
        let d = nav.degree(&root);
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            b.iter(|| black_box(nav.nav_child(&root, d / 2 + 1)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
