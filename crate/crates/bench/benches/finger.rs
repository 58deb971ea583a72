use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cslp_bench::{deep_tree, finger_fixture};
use cslp_core::ancestry::WaIndex;
use cslp_core::finger::FingerState;
use std::hint::black_box;

fn moves(c: &mut Criterion) {
    let n = 1 << 18;
    let (_, sf) = finger_fixture(n, 1);
    let mut group = c.benchmark_group("movefinger");
    for d in [1u64, 64, 4096, 1 << 16] {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| {
            let mut fs = FingerState::new(&sf).unwrap();
            fs.setfinger(&sf, n as u64 / 2).unwrap();
            let mut fwd = true;
            b.iter(|| {
                let f = fs.finger().unwrap();
                let i = if fwd { f + d } else { f - d };
                fwd = !fwd;
                black_box(fs.movefinger(&sf, i).unwrap())
            })
        });
    }
    group.finish();
}

fn ancestors(c: &mut Criterion) {
    let t = deep_tree(1 << 16, 4, 1000, 2);
    let wa = WaIndex::build(&t).unwrap();
    let queries: Vec<(usize, u64)> = (0..1024).map(|k| ((k * 7919) % t.len(), (k as u64 * 31) % (t.depth((k * 7919) % t.len()) + 1))).collect();
    c.bench_function("wa_query_1024", |b| {
        b.iter(|| queries.iter().map(|&(v, p)| wa.query(v, p)).filter(Option::is_some).count())
    });
}

criterion_group!(benches, moves, ancestors);
criterion_main!(benches);
