use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exceptional::{build_tree, ch_line, perp, Epsilon, ThreeAdicRational};

fn epsilon_by_order(c: &mut Criterion) {
    let mut group = c.benchmark_group("epsilon");
    group.sample_size(10);
    for order in 1..=5 {
        let indices = ThreeAdicRational::up_to_order(order);
        group.bench_with_input(BenchmarkId::new("fresh-memo", order), &indices, |b, indices| {
            b.iter(|| {
                let eps = Epsilon::new();
                for &t in indices {
                    black_box(eps.epsilon(t).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn perp_lines(c: &mut Criterion) {
    let (e, g, h) = (ch_line(0), ch_line(1), ch_line(3));
    c.bench_function("perp/O,O(1),O(3)", |b| b.iter(|| perp(black_box(&e), black_box(&g), black_box(&h)).unwrap()));
}

fn tree(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_tree");
    group.sample_size(10);
    for depth in [2, 4, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| b.iter(|| build_tree(d).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, epsilon_by_order, perp_lines, tree);
criterion_main!(benches);
