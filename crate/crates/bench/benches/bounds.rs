use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nevbound::bounds::{check_majorization, upper_bound_b};
use nevbound::BoundMode;
use nevbound_bench::example;

fn upper(c: &mut Criterion) {
    let (_, data) = example();
    let mut g = c.benchmark_group("upper_bound_b");
    for (name, mode) in [("at_t", BoundMode::AtT), ("infimum", BoundMode::GridInfimum)] {
        for r in [1e3, 1e8] {
            g.bench_with_input(BenchmarkId::new(name, r), &r, |b, &r| {
                b.iter(|| upper_bound_b(&data, black_box(r), mode).unwrap().b_upper)
            });
        }
    }
    g.finish();
}

fn hypotheses(c: &mut Criterion) {
    let (h, data) = example();
    c.bench_function("check_majorization_2000", |b| b.iter(|| check_majorization(&h, &data, black_box(2000)).unwrap()));
}

criterion_group!(benches, upper, hypotheses);
criterion_main!(benches);
