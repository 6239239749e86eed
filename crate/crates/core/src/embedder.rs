//! Greedy embedding of tight trees into peeled hosts.
//!
//! After peeling, every shadow set avoiding host class `i` has at least `t_i`
//! completions, while the tree only ever places `t_i` vertices in that class.
//! So following the tree's construction order and always taking the least
//! free completion never gets stuck.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, ShadowIndex, Vertex};
use crate::peeling::{self, assign_labels, peel, PeelError, Thresholds};
use crate::tight_tree::TightTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("tree is {tree}-uniform but host is {host}-uniform")]
    TreeHostArityMismatch { tree: usize, host: usize },
    #[error("host hypergraph carries no r-partition")]
    NoPartition,
    #[error("peeling emptied a host with {edges} edges and shadow {shadow} although it exceeds the density bound for t = {t}")]
    LemmaViolated { edges: usize, shadow: usize, t: usize },
    #[error("no free completion for tree edge {edge}")]
    GreedyStuck { edge: usize },
    #[error(transparent)]
    Peel(#[from] PeelError),
}

/// Record for one tree edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedStep {
    /// Host edge the tree edge was mapped onto.
    pub host_edge: EdgeId,
    /// Tree vertex placed at this step (`None` for the root edge).
    pub placed: Option<Vertex>,
    /// Host class receiving the placed vertex, when the host is partitioned.
    pub host_class: Option<usize>,
    /// Occupied host vertices in that class just before placement.
    pub occupied_before: usize,
}

/// Injective map from tree vertices to host vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Embedding {
    map: BTreeMap<Vertex, Vertex>,
    #[serde(skip)]
    steps: Vec<EmbedStep>,
}

impl Embedding {
    pub fn from_map(map: BTreeMap<Vertex, Vertex>) -> Self {
        Embedding { map, steps: Vec::new() }
    }

    pub fn map(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.map
    }

    pub fn image(&self, v: Vertex) -> Option<Vertex> {
        self.map.get(&v).copied()
    }

    pub fn steps(&self) -> &[EmbedStep] {
        &self.steps
    }

    /// Composes with a host relabeling.
    pub fn map_host(&self, f: impl Fn(Vertex) -> Vertex) -> Embedding {
        Embedding {
            map: self.map.iter().map(|(&k, &v)| (k, f(v))).collect(),
            steps: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("embedding serialisation cannot fail")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InconclusiveReason {
    /// Peeling emptied the host, which is below the density bound.
    DensityBoundNotMet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbedOutcome {
    Found(Embedding),
    Inconclusive(InconclusiveReason),
}

impl EmbedOutcome {
    pub fn embedding(&self) -> Option<&Embedding> {
        match self {
            EmbedOutcome::Found(e) => Some(e),
            EmbedOutcome::Inconclusive(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, EmbedOutcome::Found(_))
    }
}

/// Embeds `tree` into the r-partite `host` via thresholds, pairing, peeling
/// and greedy placement in construction order.
pub fn embed(host: &Hypergraph, tree: &TightTree) -> Result<EmbedOutcome, EmbedError> {
    if tree.r() != host.r() {
        return Err(EmbedError::TreeHostArityMismatch { tree: tree.r(), host: host.r() });
    }
    let partition = host.partition().ok_or(EmbedError::NoPartition)?;
    let thresholds = Thresholds::from_tree(tree);
    let plan = assign_labels(host, &thresholds)?;
    let peeled = peel(host, &plan)?;
    let t = tree.edge_count();
    if peeled.emptied {
        return if peeling::exceeds_density_bound(host, t) {
            Err(EmbedError::LemmaViolated { edges: host.edge_count(), shadow: host.shadow_size(), t })
        } else {
            Ok(EmbedOutcome::Inconclusive(InconclusiveReason::DensityBoundNotMet))
        };
    }

    let tree_partition = tree.canonical_partition();
    let host_class_of_tree_vertex = |v: Vertex| plan.class_of_threshold(tree_partition.class_of(v));

    let root_edge = least_edge(host, &peeled.surviving);
    let mut map = BTreeMap::new();
    for &tv in tree.root() {
        let class = host_class_of_tree_vertex(tv);
        let hv = *host
            .edge(root_edge)
            .iter()
            .find(|&&hv| partition[hv] == class)
            .expect("host edges meet every class");
        map.insert(tv, hv);
    }

    let placement = Placement { host, index: peeled.shadow(), partition: Some(partition) };
    let steps = placement.extend(tree, root_edge, map.clone(), &mut map)?;
    Ok(EmbedOutcome::Found(Embedding { map, steps }))
}

/// The unpartitioned fallback: peel with threshold `t` on every shadow set,
/// then embed greedily. Guaranteed when `|E(H)| > (t−1)·|∂H|`.
pub fn greedy_embed_nonpartite(host: &Hypergraph, tree: &TightTree) -> Result<EmbedOutcome, EmbedError> {
    if tree.r() != host.r() {
        return Err(EmbedError::TreeHostArityMismatch { tree: tree.r(), host: host.r() });
    }
    let t = tree.edge_count();
    let peeled = peeling::peel_uniform(host, t);
    if peeled.emptied {
        return if host.edge_count() > (t - 1) * host.shadow_size() {
            Err(EmbedError::LemmaViolated { edges: host.edge_count(), shadow: host.shadow_size(), t })
        } else {
            Ok(EmbedOutcome::Inconclusive(InconclusiveReason::DensityBoundNotMet))
        };
    }
    let root_edge = least_edge(host, &peeled.surviving);
    let mut map = BTreeMap::new();
    for (&tv, &hv) in tree.root().iter().zip(host.edge(root_edge)) {
        map.insert(tv, hv);
    }
    let placement = Placement { host, index: peeled.shadow(), partition: None };
    let steps = placement.extend(tree, root_edge, map.clone(), &mut map)?;
    Ok(EmbedOutcome::Found(Embedding { map, steps }))
}

fn least_edge(host: &Hypergraph, edges: &[EdgeId]) -> EdgeId {
    *edges
        .iter()
        .min_by(|&&a, &&b| host.edge(a).cmp(host.edge(b)))
        .expect("caller checked for survivors")
}

struct Placement<'a> {
    host: &'a Hypergraph,
    index: &'a ShadowIndex,
    partition: Option<&'a [usize]>,
}

impl Placement<'_> {
    fn extend(
        &self,
        tree: &TightTree,
        root_edge: EdgeId,
        root_map: BTreeMap<Vertex, Vertex>,
        map: &mut BTreeMap<Vertex, Vertex>,
    ) -> Result<Vec<EmbedStep>, EmbedError> {
        let mut occupied = vec![false; self.host.vertex_count()];
        let mut class_load = vec![0usize; self.host.r()];
        for &hv in root_map.values() {
            occupied[hv] = true;
            if let Some(p) = self.partition {
                class_load[p[hv]] += 1;
            }
        }
        let mut steps = vec![EmbedStep { host_edge: root_edge, placed: None, host_class: None, occupied_before: 0 }];

        for (i, step) in tree.steps().iter().enumerate() {
            let mut spine: Vec<Vertex> = TightTree::spine(step).map(|v| map[&v]).collect();
            spine.sort_unstable();
            let stuck = EmbedError::GreedyStuck { edge: i + 2 };
            let id = self.index.id_of(&spine).ok_or(stuck.clone())?;
            let (host_edge, hv) = self
                .index
                .completions(id)
                .filter(|&(_, w)| !occupied[w])
                .min_by_key(|&(_, w)| w)
                .ok_or(stuck)?;
            let host_class = self.partition.map(|p| p[hv]);
            let occupied_before = host_class.map_or(0, |c| class_load[c]);
            occupied[hv] = true;
            if let Some(c) = host_class {
                class_load[c] += 1;
            }
            map.insert(step.new, hv);
            steps.push(EmbedStep { host_edge, placed: Some(step.new), host_class, occupied_before });
        }
        Ok(steps)
    }
}

/// Injective, total on the tree, and every tree edge lands on a host edge.
pub fn verify_embedding(host: &Hypergraph, tree: &TightTree, embedding: &BTreeMap<Vertex, Vertex>) -> bool {
    let vertices = tree.vertex_order();
    let mut used = std::collections::HashSet::new();
    for v in &vertices {
        match embedding.get(v) {
            Some(&hv) if hv < host.vertex_count() && used.insert(hv) => {}
            _ => return false,
        }
    }
    tree.edges().all(|e| {
        let image: Vec<Vertex> = e.iter().map(|v| embedding[v]).collect();
        host.contains_edge(&image)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tight_tree::{tight_path, Step};

    fn k23() -> Hypergraph {
        let edges = (0..2).flat_map(|a| (2..5).map(move |b| vec![a, b])).collect();
        Hypergraph::new(2, 5, edges, Some(vec![0, 0, 1, 1, 1])).unwrap()
    }

    fn triangle() -> Hypergraph {
        Hypergraph::from_edges(2, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn single_edge_into_single_edge() {
        let host = Hypergraph::new(3, 3, vec![vec![0, 1, 2]], Some(vec![0, 1, 2])).unwrap();
        let tree = tight_path(3, 1);
        let EmbedOutcome::Found(e) = embed(&host, &tree).unwrap() else { panic!() };
        assert_eq!(e.map().values().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(verify_embedding(&host, &tree, e.map()));
    }

    #[test]
    fn path_into_k23() {
        let host = k23();
        let tree = tight_path(2, 3);
        assert!(peeling::exceeds_density_bound(&host, 3));
        let EmbedOutcome::Found(e) = embed(&host, &tree).unwrap() else { panic!() };
        assert!(verify_embedding(&host, &tree, e.map()));
        for s in &e.steps()[1..] {
            assert!(s.occupied_before < 2);
        }
        assert_eq!(e.to_json(), r#"{"0":0,"1":2,"2":1,"3":3}"#);
    }

    #[test]
    fn errors() {
        assert_eq!(
            embed(&k23(), &tight_path(3, 1)).unwrap_err(),
            EmbedError::TreeHostArityMismatch { tree: 3, host: 2 }
        );
        assert_eq!(embed(&triangle(), &tight_path(2, 1)).unwrap_err(), EmbedError::NoPartition);
    }

    #[test]
    fn sparse_host_is_inconclusive() {
        let matching = Hypergraph::from_edges(2, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(
            embed(&matching, &tight_path(2, 3)).unwrap(),
            EmbedOutcome::Inconclusive(InconclusiveReason::DensityBoundNotMet)
        );
    }

    #[test]
    fn nonpartite_greedy() {
        let tri = triangle();
        let EmbedOutcome::Found(e) = greedy_embed_nonpartite(&tri, &tight_path(2, 1)).unwrap() else { panic!() };
        assert!(verify_embedding(&tri, &tight_path(2, 1), e.map()));
        let EmbedOutcome::Found(e) = greedy_embed_nonpartite(&tri, &tight_path(2, 2)).unwrap() else { panic!() };
        assert!(verify_embedding(&tri, &tight_path(2, 2), e.map()));
        assert_eq!(
            greedy_embed_nonpartite(&tri, &tight_path(2, 3)).unwrap(),
            EmbedOutcome::Inconclusive(InconclusiveReason::DensityBoundNotMet)
        );
        let empty = Hypergraph::new(2, 2, vec![], None).unwrap();
        assert!(!greedy_embed_nonpartite(&empty, &tight_path(2, 1)).unwrap().is_found());
    }

    #[test]
    fn verify_rejects_bad_maps() {
        let host = Hypergraph::new(3, 3, vec![vec![0, 1, 2]], None).unwrap();
        let tree = tight_path(3, 1);
        let good: BTreeMap<_, _> = [(0, 2), (1, 0), (2, 1)].into_iter().collect();
        assert!(verify_embedding(&host, &tree, &good));
        let collapsed: BTreeMap<_, _> = [(0, 0), (1, 0), (2, 1)].into_iter().collect();
        assert!(!verify_embedding(&host, &tree, &collapsed));
        let partial: BTreeMap<_, _> = [(0, 0), (1, 1)].into_iter().collect();
        assert!(!verify_embedding(&host, &tree, &partial));
        let two = TightTree::new(3, vec![0, 1, 2], vec![Step { edge: vec![1, 2, 3], new: 3, witness: 1 }]).unwrap();
        let missing_edge: BTreeMap<_, _> = [(0, 0), (1, 1), (2, 2), (3, 0)].into_iter().collect();
        assert!(!verify_embedding(&host, &two, &missing_edge));
    }
}
