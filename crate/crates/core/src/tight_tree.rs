//! Tight r-trees as validated construction sequences.
//!
//! A tight tree starts from a root edge; every later edge adds exactly one
//! new vertex and its remaining r−1 vertices (the spine) sit inside some
//! earlier edge (the witness). Edges are numbered from 1, the root being
//! edge 1, and witnesses refer to these numbers.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("uniformity must be at least 2, got {0}")]
    UniformityTooSmall(usize),
    #[error("edge {edge} does not consist of exactly r distinct vertices")]
    MalformedEdge { edge: usize },
    #[error("edge {edge}: new vertex {vertex} is not in the edge")]
    NewVertexNotInEdge { edge: usize, vertex: Vertex },
    #[error("edge {edge}: vertex {vertex} was already introduced")]
    NewVertexReused { edge: usize, vertex: Vertex },
    #[error("edge {edge}: witness {witness} does not name an earlier edge")]
    WitnessOutOfRange { edge: usize, witness: usize },
    #[error("edge {edge}: spine is not contained in witness edge {witness}")]
    SpineNotInWitness { edge: usize, witness: usize },
}

/// One extension step: `edge` contains the fresh vertex `new`, and
/// `edge ∖ {new}` lies inside edge number `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub edge: Vec<Vertex>,
    pub new: Vertex,
    pub witness: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTree", into = "RawTree")]
pub struct TightTree {
    r: usize,
    root: Vec<Vertex>,
    steps: Vec<Step>,
}

#[derive(Serialize, Deserialize)]
struct RawTree {
    r: usize,
    root: Vec<Vertex>,
    steps: Vec<Step>,
}

impl TryFrom<RawTree> for TightTree {
    type Error = TreeError;

    fn try_from(raw: RawTree) -> Result<Self, Self::Error> {
        TightTree::new(raw.r, raw.root, raw.steps)
    }
}

impl From<TightTree> for RawTree {
    fn from(tree: TightTree) -> Self {
        RawTree { r: tree.r, root: tree.root, steps: tree.steps }
    }
}

impl TightTree {
    /// Validates a construction sequence, reporting the first invalid edge.
    pub fn new(r: usize, mut root: Vec<Vertex>, mut steps: Vec<Step>) -> Result<Self, TreeError> {
        if r < 2 {
            return Err(TreeError::UniformityTooSmall(r));
        }
        root.sort_unstable();
        root.dedup();
        if root.len() != r {
            return Err(TreeError::MalformedEdge { edge: 1 });
        }
        let mut seen: HashSet<Vertex> = root.iter().copied().collect();
        let mut edge_sets: Vec<Vec<Vertex>> = vec![root.clone()];

        for (i, step) in steps.iter_mut().enumerate() {
            let number = i + 2;
            step.edge.sort_unstable();
            step.edge.dedup();
            if step.edge.len() != r {
                return Err(TreeError::MalformedEdge { edge: number });
            }
            if !step.edge.contains(&step.new) {
                return Err(TreeError::NewVertexNotInEdge { edge: number, vertex: step.new });
            }
            if seen.contains(&step.new) {
                return Err(TreeError::NewVertexReused { edge: number, vertex: step.new });
            }
            if step.witness == 0 || step.witness >= number {
                return Err(TreeError::WitnessOutOfRange { edge: number, witness: step.witness });
            }
            let witness = &edge_sets[step.witness - 1];
            if step
                .edge
                .iter()
                .any(|v| *v != step.new && witness.binary_search(v).is_err())
            {
                return Err(TreeError::SpineNotInWitness { edge: number, witness: step.witness });
            }
            seen.insert(step.new);
            edge_sets.push(step.edge.clone());
        }
        Ok(TightTree { r, root, steps })
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serialisation cannot fail")
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of edges `t`.
    pub fn edge_count(&self) -> usize {
        self.steps.len() + 1
    }

    /// Always `t + r − 1`.
    pub fn vertex_count(&self) -> usize {
        self.steps.len() + self.r
    }

    pub fn root(&self) -> &[Vertex] {
        &self.root
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Edge number `k` (1-based), vertices sorted.
    pub fn edge(&self, k: usize) -> &[Vertex] {
        if k == 1 {
            &self.root
        } else {
            &self.steps[k - 2].edge
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = &[Vertex]> + '_ {
        std::iter::once(self.root.as_slice()).chain(self.steps.iter().map(|s| s.edge.as_slice()))
    }

    /// Vertices in construction order: the sorted root, then each new vertex.
    pub fn vertex_order(&self) -> Vec<Vertex> {
        self.root.iter().copied().chain(self.steps.iter().map(|s| s.new)).collect()
    }

    /// `edge ∖ {new}` for step `step`.
    pub fn spine(step: &Step) -> impl Iterator<Item = Vertex> + '_ {
        step.edge.iter().copied().filter(move |&v| v != step.new)
    }

    /// The unique r-partition, with root classes fixed by sorted vertex id.
    pub fn canonical_partition(&self) -> TreePartition {
        let mut labels = BTreeMap::new();
        for (class, &v) in self.root.iter().enumerate() {
            labels.insert(v, class);
        }
        let mut present = vec![false; self.r];
        for step in &self.steps {
            present.iter_mut().for_each(|p| *p = false);
            for v in Self::spine(step) {
                present[labels[&v]] = true;
            }
            let missing = present.iter().position(|&p| !p).expect("spine has r-1 vertices");
            labels.insert(step.new, missing);
        }
        let mut sizes = vec![0; self.r];
        for &c in labels.values() {
            sizes[c] += 1;
        }
        let mut sorted_sizes = sizes.clone();
        sorted_sizes.sort_unstable();
        TreePartition { labels, sizes, sorted_sizes }
    }

    /// Applies `map` to every vertex; `map` must be injective on the tree.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> TightTree {
        let root = self.root.iter().map(|&v| map(v)).collect();
        let steps = self
            .steps
            .iter()
            .map(|s| Step {
                edge: s.edge.iter().map(|&v| map(v)).collect(),
                new: map(s.new),
                witness: s.witness,
            })
            .collect();
        TightTree::new(self.r, root, steps).expect("injective relabeling keeps the tree valid")
    }
}

/// Class labels of a tight tree and the class sizes `(t_1, …, t_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePartition {
    pub labels: BTreeMap<Vertex, usize>,
    /// Sizes indexed by canonical class.
    pub sizes: Vec<usize>,
    pub sorted_sizes: Vec<usize>,
}

impl TreePartition {
    pub fn class_of(&self, v: Vertex) -> usize {
        self.labels[&v]
    }
}

/// Tight path with `t` edges on vertices `0..t+r−1`; edge `i` is `{i−1, …, i+r−2}`.
pub fn tight_path(r: usize, t: usize) -> TightTree {
    assert!(r >= 2 && t >= 1, "tight_path needs r >= 2 and t >= 1");
    let root = (0..r).collect();
    let steps = (2..=t)
        .map(|i| Step { edge: (i - 1..i - 1 + r).collect(), new: i + r - 2, witness: i - 1 })
        .collect();
    TightTree::new(r, root, steps).expect("tight paths are valid")
}

/// Samples a tight tree by repeatedly choosing a uniform earlier edge and a
/// uniform (r−1)-subset of it as the spine. New vertices are numbered
/// consecutively from `r`.
pub fn random_tight_tree(r: usize, t: usize, seed: u64) -> TightTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tight_tree_with(r, t, &mut rng)
}

pub fn random_tight_tree_with<R: Rng + ?Sized>(r: usize, t: usize, rng: &mut R) -> TightTree {
    assert!(r >= 2 && t >= 1, "random_tight_tree needs r >= 2 and t >= 1");
    let mut edges: Vec<Vec<Vertex>> = vec![(0..r).collect()];
    let mut steps = Vec::with_capacity(t - 1);
    for number in 2..=t {
        let witness = rng.gen_range(1..number);
        let omit = rng.gen_range(0..r);
        let new = number + r - 2;
        let mut edge: Vec<Vertex> = edges[witness - 1]
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != omit)
            .map(|(_, &v)| v)
            .collect();
        edge.push(new);
        edges.push(edge.clone());
        steps.push(Step { edge, new, witness });
    }
    TightTree::new(r, (0..r).collect(), steps).expect("sampler follows the construction rule")
}

/// Random tight tree whose vertex ids are additionally shuffled within
/// `0..t+r−1`, so construction order and id order disagree.
pub fn random_shuffled_tight_tree<R: Rng + ?Sized>(r: usize, t: usize, rng: &mut R) -> TightTree {
    let tree = random_tight_tree_with(r, t, rng);
    let mut perm: Vec<Vertex> = (0..tree.vertex_count()).collect();
    perm.shuffle(rng);
    tree.relabel(|v| perm[v])
}

/// Every tight r-tree with `t` edges up to isomorphism, found by running all
/// construction sequences and discarding isomorphic duplicates by brute
/// force. Only meant for trees with a handful of vertices.
pub fn enumerate_shapes(r: usize, t: usize) -> Vec<TightTree> {
    assert!(r >= 2 && t >= 1);
    assert!(t + r - 1 <= 8, "brute-force isomorphism is limited to 8 vertices");
    let mut shapes: Vec<TightTree> = Vec::new();
    let mut seen_edge_sets: HashSet<BTreeSet<Vec<Vertex>>> = HashSet::new();
    let mut stack: Vec<(Vec<Vec<Vertex>>, Vec<Step>)> = vec![(vec![(0..r).collect()], Vec::new())];
    while let Some((edges, steps)) = stack.pop() {
        if edges.len() == t {
            let key: BTreeSet<Vec<Vertex>> = edges.iter().cloned().collect();
            if !seen_edge_sets.insert(key) {
                continue;
            }
            let tree = TightTree::new(r, (0..r).collect(), steps).expect("valid by construction");
            if !shapes.iter().any(|s| isomorphic(s, &tree)) {
                shapes.push(tree);
            }
            continue;
        }
        let number = edges.len() + 1;
        let new = number + r - 2;
        for witness in 1..number {
            for omit in 0..r {
                let mut edge: Vec<Vertex> = edges[witness - 1]
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != omit)
                    .map(|(_, &v)| v)
                    .collect();
                edge.push(new);
                edge.sort_unstable();
                if edges.contains(&edge) {
                    continue;
                }
                let mut next_edges = edges.clone();
                next_edges.push(edge.clone());
                let mut next_steps = steps.clone();
                next_steps.push(Step { edge, new, witness });
                stack.push((next_edges, next_steps));
            }
        }
    }
    shapes
}

/// Brute-force isomorphism test over all vertex bijections.
pub fn isomorphic(a: &TightTree, b: &TightTree) -> bool {
    if a.r != b.r || a.edge_count() != b.edge_count() {
        return false;
    }
    let va = a.vertex_order();
    let vb = b.vertex_order();
    let target: HashSet<Vec<Vertex>> = b.edges().map(|e| e.to_vec()).collect();
    let mut perm: Vec<usize> = (0..vb.len()).collect();
    permute_until(&mut perm, 0, &mut |p| {
        let map: BTreeMap<Vertex, Vertex> = va.iter().zip(p).map(|(&x, &i)| (x, vb[i])).collect();
        a.edges().all(|e| {
            let mut img: Vec<Vertex> = e.iter().map(|v| map[v]).collect();
            img.sort_unstable();
            target.contains(&img)
        })
    })
}

fn permute_until(perm: &mut Vec<usize>, k: usize, check: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return check(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if permute_until(perm, k + 1, check) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(edge: &[Vertex], new: Vertex, witness: usize) -> Step {
        Step { edge: edge.to_vec(), new, witness }
    }

    #[test]
    fn validates_examples() {
        let t = TightTree::new(3, vec![0, 1, 2], vec![step(&[1, 2, 3], 3, 1)]).unwrap();
        assert_eq!(t.edge_count(), 2);
        assert_eq!(t.vertex_count(), 4);

        let p = TightTree::new(2, vec![0, 1], vec![step(&[1, 2], 2, 1), step(&[2, 3], 3, 2)]).unwrap();
        assert_eq!(p.edge_count(), 3);
    }

    #[test]
    fn rejects_invalid_steps() {
        assert_eq!(
            TightTree::new(3, vec![0, 1, 2], vec![step(&[3, 4, 5], 3, 1)]).unwrap_err(),
            TreeError::SpineNotInWitness { edge: 2, witness: 1 }
        );
        assert_eq!(
            TightTree::new(3, vec![0, 1, 2], vec![step(&[0, 1, 2], 2, 1)]).unwrap_err(),
            TreeError::NewVertexReused { edge: 2, vertex: 2 }
        );
        assert_eq!(
            TightTree::new(3, vec![0, 1, 2], vec![step(&[1, 2, 3], 3, 2)]).unwrap_err(),
            TreeError::WitnessOutOfRange { edge: 2, witness: 2 }
        );
        assert_eq!(
            TightTree::new(3, vec![0, 1, 2], vec![step(&[1, 2, 3], 3, 0)]).unwrap_err(),
            TreeError::WitnessOutOfRange { edge: 2, witness: 0 }
        );
        assert_eq!(
            TightTree::new(3, vec![0, 1, 2], vec![step(&[1, 2, 3], 4, 1)]).unwrap_err(),
            TreeError::NewVertexNotInEdge { edge: 2, vertex: 4 }
        );
        assert_eq!(
            TightTree::new(3, vec![0, 1, 1], vec![]).unwrap_err(),
            TreeError::MalformedEdge { edge: 1 }
        );
    }

    #[test]
    fn canonical_partition_propagates_classes() {
        // a=10, b=11, c=12, d=13, e=14
        let t = TightTree::new(
            3,
            vec![10, 11, 12],
            vec![step(&[11, 12, 13], 13, 1), step(&[12, 13, 14], 14, 2)],
        )
        .unwrap();
        let p = t.canonical_partition();
        assert_eq!(p.class_of(13), p.class_of(10));
        assert_eq!(p.class_of(14), p.class_of(11));
        assert_eq!(p.sizes, vec![2, 2, 1]);
        assert_eq!(p.sorted_sizes, vec![1, 2, 2]);
    }

    #[test]
    fn partition_sizes_of_paths_and_single_edges() {
        assert_eq!(tight_path(4, 1).canonical_partition().sizes, vec![1, 1, 1, 1]);
        for t in 1..10 {
            let p = tight_path(2, t).canonical_partition();
            assert_eq!(p.sizes, vec![(t + 2) / 2, (t + 1) / 2]);
        }
        assert_eq!(tight_path(3, 4).canonical_partition().sizes, vec![2, 2, 2]);
    }

    #[test]
    fn tight_path_edges() {
        let p = tight_path(2, 3);
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![&[0, 1][..], &[1, 2], &[2, 3]]);
        let p = tight_path(3, 3);
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![&[0, 1, 2][..], &[1, 2, 3], &[2, 3, 4]]);
    }

    #[test]
    fn sampler_small_cases() {
        for seed in 0..20 {
            assert_eq!(random_tight_tree(2, 1, seed).edge_count(), 1);
            let t = random_tight_tree(3, 2, seed);
            let shared: Vec<_> = t.edge(1).iter().filter(|v| t.edge(2).contains(v)).collect();
            assert_eq!(shared.len(), 2);
        }
        assert_eq!(random_tight_tree(3, 7, 42), random_tight_tree(3, 7, 42));
    }

    #[test]
    fn sampler_reaches_both_trees_with_three_edges() {
        let shapes = enumerate_shapes(2, 3);
        assert_eq!(shapes.len(), 2);
        let mut hit = [false; 2];
        for seed in 0..100 {
            let t = random_tight_tree(2, 3, seed);
            let k = shapes.iter().position(|s| isomorphic(s, &t)).unwrap();
            hit[k] = true;
        }
        assert_eq!(hit, [true, true]);
    }

    #[test]
    fn shape_counts_match_unlabeled_tree_counts() {
        assert_eq!(enumerate_shapes(2, 1).len(), 1);
        assert_eq!(enumerate_shapes(2, 2).len(), 1);
        assert_eq!(enumerate_shapes(2, 3).len(), 2);
        assert_eq!(enumerate_shapes(2, 4).len(), 3);
        assert_eq!(enumerate_shapes(2, 5).len(), 6);
        assert_eq!(enumerate_shapes(3, 2).len(), 1);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let t = tight_path(3, 3);
        let json = t.to_json();
        assert_eq!(
            json,
            r#"{"r":3,"root":[0,1,2],"steps":[{"edge":[1,2,3],"new":3,"witness":1},{"edge":[2,3,4],"new":4,"witness":2}]}"#
        );
        assert_eq!(TightTree::from_json(&json).unwrap(), t);
        let bad = r#"{"r":3,"root":[0,1,2],"steps":[{"edge":[3,4,5],"new":3,"witness":1}]}"#;
        assert!(TightTree::from_json(bad).is_err());
    }
}
