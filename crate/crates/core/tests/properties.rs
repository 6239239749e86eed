use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tightree_core::experiment::{random_class_sizes, random_graph, random_lemma_instance, random_partite_host};
use tightree_core::hypergraph::ShadowIndex;
use tightree_core::peeling::{self, check_codegree_condition, peel_with_order, WorklistOrder};
use tightree_core::tight_tree::{self, enumerate_shapes, random_shuffled_tight_tree, random_tight_tree};
use tightree_core::turan;
use tightree_core::{
    assign_labels, contains_any_tight_tree, contains_tree, embed, format, verify_embedding, EmbedOutcome, Hypergraph,
    OracleVerdict, RhgFile, SearchBudget, Thresholds, TightTree, Vertex,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_hypergraph(r: usize, n: usize, p: f64, rng: &mut ChaCha8Rng) -> Hypergraph {
    let mut edges = Vec::new();
    let mut subset: Vec<Vertex> = (0..r).collect();
    loop {
        if rng.gen_bool(p) {
            edges.push(subset.clone());
        }
        // next r-subset of 0..n in lexicographic order
        let Some(i) = (0..r).rev().find(|&i| subset[i] < n - r + i) else { break };
        subset[i] += 1;
        for j in i + 1..r {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Hypergraph::new(r, n, edges, None).unwrap()
}

/// Independent containment check: every injective map of tree vertices.
fn brute_force_contains(host: &Hypergraph, tree: &TightTree) -> bool {
    let order = tree.vertex_order();
    let edges: BTreeSet<Vec<Vertex>> = host.edges().iter().cloned().collect();
    let tree_edges: Vec<Vec<Vertex>> = tree.edges().map(<[Vertex]>::to_vec).collect();
    fn rec(
        k: usize,
        order: &[Vertex],
        map: &mut BTreeMap<Vertex, Vertex>,
        used: &mut Vec<bool>,
        tree_edges: &[Vec<Vertex>],
        edges: &BTreeSet<Vec<Vertex>>,
    ) -> bool {
        if k == order.len() {
            return tree_edges.iter().all(|e| {
                let mut img: Vec<Vertex> = e.iter().map(|v| map[v]).collect();
                img.sort_unstable();
                edges.contains(&img)
            });
        }
        for h in 0..used.len() {
            if !used[h] {
                used[h] = true;
                map.insert(order[k], h);
                if rec(k + 1, order, map, used, tree_edges, edges) {
                    return true;
                }
                used[h] = false;
            }
        }
        map.remove(&order[k]);
        false
    }
    rec(0, &order, &mut BTreeMap::new(), &mut vec![false; host.vertex_count()], &tree_edges, &edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codegrees_double_count_edges(seed: u64, r in 2usize..=4, n in 4usize..=8, p in 0.1f64..0.9) {
        let h = random_hypergraph(r, n.max(r), p, &mut rng(seed));
        let index = h.shadow();
        let total: usize = index.ids().map(|id| index.codegree(id)).sum();
        prop_assert_eq!(total, r * h.edge_count());
        for id in index.ids() {
            prop_assert_eq!(h.codegree(index.set(id)).unwrap(), index.codegree(id));
        }
    }

    #[test]
    fn incremental_shadow_matches_rebuild(seed: u64, r in 2usize..=4, n in 4usize..=8) {
        let mut g = rng(seed);
        let h = random_hypergraph(r, n.max(r), 0.6, &mut g);
        let mut index = ShadowIndex::build(r, h.edges());
        let mut alive = vec![true; h.edge_count()];
        for e in 0..h.edge_count() {
            if g.gen_bool(0.5) {
                prop_assert!(index.delete_edge(e));
                prop_assert!(!index.delete_edge(e));
                alive[e] = false;
            }
        }
        let rebuilt = h.edge_subgraph(|e| alive[e]);
        prop_assert_eq!(index.snapshot(), rebuilt.shadow().snapshot());
        prop_assert_eq!(index.len(), rebuilt.shadow_size());
        prop_assert_eq!(index.live_edge_count(), rebuilt.edge_count());
    }

    #[test]
    fn random_trees_validate_and_round_trip(seed: u64, r in 2usize..=5, t in 1usize..=12) {
        let tree = random_tight_tree(r, t, seed);
        prop_assert_eq!(tree.edge_count(), t);
        prop_assert_eq!(tree.vertex_count(), t + r - 1);
        let back = TightTree::from_json(&tree.to_json()).unwrap();
        prop_assert_eq!(&back, &tree);
        let partition = tree.canonical_partition();
        prop_assert_eq!(partition.sizes.iter().sum::<usize>(), t + r - 1);
        for e in tree.edges() {
            let classes: BTreeSet<usize> = e.iter().map(|&v| partition.class_of(v)).collect();
            prop_assert_eq!(classes.len(), r);
        }
    }

    #[test]
    fn partition_sizes_survive_relabeling(seed: u64, r in 2usize..=4, t in 1usize..=10) {
        let mut g = rng(seed);
        let tree = random_tight_tree(r, t, g.gen());
        let mut perm: Vec<Vertex> = (0..tree.vertex_count()).collect();
        perm.shuffle(&mut g);
        let shifted = tree.relabel(|v| perm[v] + 100);
        prop_assert_eq!(tree.canonical_partition().sorted_sizes, shifted.canonical_partition().sorted_sizes);
        if tree.vertex_count() <= 6 {
            prop_assert!(tight_tree::isomorphic(&tree, &tree.relabel(|v| perm[v])));
        }
    }

    #[test]
    fn peeling_guarantee_and_confluence(seed: u64, r in 2usize..=4) {
        let mut g = rng(seed);
        let (instance, thresholds) = random_lemma_instance(r, 6, 6, &mut g);
        let h = &instance.host;
        let plan = assign_labels(h, &thresholds).unwrap();
        let canonical = peel_with_order(h, &plan, WorklistOrder::Canonical).unwrap();
        prop_assert!(!canonical.emptied);
        prop_assert!(check_codegree_condition(&canonical.subgraph(h), &plan).unwrap());
        prop_assert!(peeling::trace_ledger_holds(h, &plan, &canonical));
        let random = peel_with_order(h, &plan, WorklistOrder::Random(g.gen())).unwrap();
        prop_assert_eq!(&random.surviving, &canonical.surviving);
    }

    #[test]
    fn embedding_is_sound_and_complete_above_the_bound(seed: u64, r in 2usize..=4, t in 1usize..=6) {
        let mut g = rng(seed);
        let tree = random_shuffled_tight_tree(r, t, &mut g);
        let sizes = random_class_sizes(r, t, 6, &mut g);
        let host = random_partite_host(&sizes, t, &mut g).host;
        let outcome = embed(&host, &tree).unwrap();
        let EmbedOutcome::Found(embedding) = outcome else {
            return Err(TestCaseError::fail("dense host without embedding"));
        };
        prop_assert!(verify_embedding(&host, &tree, embedding.map()));
        let plan = assign_labels(&host, &Thresholds::from_tree(&tree)).unwrap();
        for step in embedding.steps() {
            if let Some(class) = step.host_class {
                prop_assert!(step.occupied_before < plan.class_threshold(class));
            }
        }
    }

    #[test]
    fn embed_outcomes_agree_with_brute_force(seed: u64, t in 1usize..=3, n_per_class in 1usize..=3, p in 0.2f64..1.0) {
        let mut g = rng(seed);
        let tree = random_tight_tree(2, t, g.gen());
        let n = 2 * n_per_class + 1;
        let partition: Vec<usize> = (0..n).map(|v| v % 2).collect();
        let edges: Vec<Vec<Vertex>> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| vec![a, b]))
            .filter(|e| partition[e[0]] != partition[e[1]])
            .filter(|_| g.gen_bool(p))
            .collect();
        let host = Hypergraph::new(2, n, edges, Some(partition)).unwrap();
        let truth = brute_force_contains(&host, &tree);
        let verdict = contains_tree(&host, &tree, SearchBudget::default());
        prop_assert_eq!(verdict.is_found(), truth);
        prop_assert!(verdict.is_found() || verdict.is_absent());
        if let OracleVerdict::Found(e) = &verdict {
            prop_assert!(verify_embedding(&host, &tree, e.map()));
        }
        if let EmbedOutcome::Found(e) = embed(&host, &tree).unwrap() {
            prop_assert!(truth && verify_embedding(&host, &tree, e.map()));
        }
    }

    #[test]
    fn oracle_matches_brute_force_on_hypergraphs(seed: u64, r in 2usize..=3, t in 1usize..=3, n in 3usize..=6, p in 0.1f64..0.8) {
        let mut g = rng(seed);
        let tree = random_tight_tree(r, t, g.gen());
        let host = random_hypergraph(r, n.max(r), p, &mut g);
        let verdict = contains_tree(&host, &tree, SearchBudget::default());
        prop_assert_eq!(verdict.is_found(), brute_force_contains(&host, &tree));
    }

    #[test]
    fn oracle_is_invariant_under_host_relabeling(seed: u64, r in 2usize..=3, t in 1usize..=4, n in 4usize..=7) {
        let mut g = rng(seed);
        let tree = random_tight_tree(r, t, g.gen());
        let host = random_hypergraph(r, n, 0.4, &mut g);
        let mut perm: Vec<Vertex> = (0..n).collect();
        perm.shuffle(&mut g);
        let relabeled = host.relabel(&perm);
        let budget = SearchBudget::default();
        prop_assert_eq!(contains_tree(&host, &tree, budget).is_found(), contains_tree(&relabeled, &tree, budget).is_found());
        prop_assert_eq!(
            contains_any_tight_tree(&host, t, 1, budget).is_found(),
            contains_any_tight_tree(&relabeled, t, 1, budget).is_found()
        );
    }

    #[test]
    fn any_tree_search_agrees_with_every_shape(seed: u64, r in 2usize..=3, t in 1usize..=4, n in 3usize..=7, p in 0.1f64..0.7) {
        let host = random_hypergraph(r, n.max(r), p, &mut rng(seed));
        let budget = SearchBudget::default();
        let any = contains_any_tight_tree(&host, t, 1, budget);
        let some_shape = enumerate_shapes(r, t).iter().any(|shape| contains_tree(&host, shape, budget).is_found());
        prop_assert_eq!(any.is_found(), some_shape);
        if let OracleVerdict::Found(witness) = any {
            prop_assert_eq!(witness.edge_count(), t);
            prop_assert!(witness.edges().all(|e| host.contains_edge(e)));
        }
    }

    #[test]
    fn rhg_round_trip(seed: u64, r in 2usize..=4, n in 4usize..=8, p in 0.0f64..1.0) {
        let h = random_hypergraph(r, n.max(r), p, &mut rng(seed));
        let text = format::write(&RhgFile::new(h.clone()));
        let parsed = format::parse(&text).unwrap();
        prop_assert_eq!(parsed.hypergraph.edges(), h.edges());
        prop_assert_eq!(format::write(&parsed), text);
    }

    #[test]
    fn local_search_cut_invariants(seed: u64, n in 2usize..=30, density in 0.0f64..1.0) {
        let mut g = rng(seed);
        let m = ((n * (n - 1) / 2) as f64 * density) as usize;
        let graph = random_graph(n, m, &mut g);
        let cut = turan::local_search_two_cut(&graph, g.gen(), 4).unwrap();
        let mut deg = vec![0; n];
        for e in graph.edges() {
            deg[e[0]] += 1;
            deg[e[1]] += 1;
        }
        for v in 0..n {
            prop_assert!(2 * cut.crossing_degree[v] >= deg[v]);
        }
        prop_assert!(2 * cut.size >= m);
        prop_assert_eq!(turan::Cut::from_sides(&graph, cut.sides.clone()), cut);
    }
}

#[test]
fn shape_counts_for_small_trees() {
    // graphs: trees with 1..=5 edges (OEIS A000055 at 2..=6 vertices)
    let counts: Vec<usize> = (1..=5).map(|t| enumerate_shapes(2, t).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 6]);
    for t in 1..=4 {
        for shape in enumerate_shapes(3, t) {
            assert_eq!(shape.edge_count(), t);
        }
    }
}
