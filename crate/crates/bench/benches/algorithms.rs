use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tightree_bench::{random_graph, random_partite};
use tightree_core::extremal::{lower_bound_graph, ConstructionParams};
use tightree_core::oracle::{contains_any_tight_tree, SearchBudget};
use tightree_core::peeling::{assign_labels, peel, Thresholds};
use tightree_core::tight_tree::random_tight_tree;
use tightree_core::turan::local_search_two_cut;
use tightree_core::{embed, Hypergraph};

fn shadow(c: &mut Criterion) {
    let mut group = c.benchmark_group("shadow_index");
    for r in [2, 3, 4] {
        let h = random_partite(r, 10, 0.3, 1);
        group.bench_with_input(BenchmarkId::from_parameter(r), &h, |b, h| {
            b.iter(|| Hypergraph::new(h.r(), h.vertex_count(), h.edges().to_vec(), h.partition().map(<[usize]>::to_vec)))
        });
    }
    group.finish();
}

fn peeling(c: &mut Criterion) {
    let mut group = c.benchmark_group("peel");
    for r in [2, 3, 4] {
        let h = random_partite(r, 10, 0.5, 2);
        let thresholds = Thresholds::new((0..r).map(|i| 2 + i).collect()).unwrap();
        let plan = assign_labels(&h, &thresholds).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(r), &(h, plan), |b, (h, plan)| {
            b.iter(|| peel(black_box(h), plan).unwrap())
        });
    }
    group.finish();
}

fn embedding(c: &mut Criterion) {
    let mut group = c.benchmark_group("embed");
    for r in [2, 3] {
        let h = random_partite(r, 12, 0.8, 3);
        let tree = random_tight_tree(r, 8, 4);
        group.bench_with_input(BenchmarkId::from_parameter(r), &(h, tree), |b, (h, tree)| {
            b.iter(|| embed(black_box(h), tree).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let construction = lower_bound_graph(ConstructionParams::new(3, 5, 2).unwrap());
    c.bench_function("oracle_lower_bound_3_5_1_2", |b| {
        b.iter(|| contains_any_tight_tree(black_box(&construction.hypergraph), 5, 2, SearchBudget::default()))
    });
}

fn cut(c: &mut Criterion) {
    let g = random_graph(200, 0.05, 5);
    c.bench_function("local_search_two_cut_n200_k8", |b| b.iter(|| local_search_two_cut(black_box(&g), 7, 8).unwrap()));
}

criterion_group!(benches, shadow, peeling, embedding, oracle, cut);
criterion_main!(benches);
