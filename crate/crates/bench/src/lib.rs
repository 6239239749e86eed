//! Deterministic inputs shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tightree_core::Hypergraph;

/// Random r-partite r-graph with `class_size` vertices per class, each
/// possible edge kept with probability `density`.
pub fn random_partite(r: usize, class_size: usize, density: f64, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = r * class_size;
    let mut edges = Vec::new();
    let mut digits = vec![0usize; r];
    loop {
        if rng.gen_bool(density) {
            edges.push(digits.iter().enumerate().map(|(c, &k)| c * class_size + k).collect());
        }
        let Some(pos) = digits.iter().position(|&d| d + 1 < class_size) else { break };
        digits[pos] += 1;
        digits[..pos].iter_mut().for_each(|d| *d = 0);
    }
    let partition = (0..n).map(|v| v / class_size).collect();
    Hypergraph::new(r, n, edges, Some(partition)).expect("random partite graph is valid")
}

/// G(n, p) as a 2-graph.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| vec![a, b]))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Hypergraph::new(2, n, edges, None).expect("random graph is valid")
}
