use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nevbound::monodromy::{log_max_on_circle, monodromy_prefix, C64};
use nevbound_bench::{chain, example};

fn products(c: &mut Criterion) {
    let mut g = c.benchmark_group("monodromy_prefix");
    for n in [100usize, 1_000, 10_000] {
        let h = chain(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| monodromy_prefix(&h, n, black_box(C64::from_polar(1e3, 0.4))).unwrap().log_norm())
        });
    }
    g.finish();
}

fn circle(c: &mut Criterion) {
    let (h, _) = example();
    let mut g = c.benchmark_group("log_max_on_circle");
    g.sample_size(20);
    for r in [1e2, 1e4, 1e6] {
        g.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| log_max_on_circle(&h, black_box(r), 64, 1e-3).unwrap().log_max)
        });
    }
    g.finish();
}

criterion_group!(benches, products, circle);
criterion_main!(benches);
