//! Uniform hypergraphs with an optional r-partition and an eagerly built
//! shadow/codegree index.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;
pub type ShadowId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("uniformity must be at least 2, got {0}")]
    UniformityTooSmall(usize),
    #[error("edge #{edge} does not consist of exactly {r} distinct vertices")]
    NonUniformEdge { edge: usize, r: usize },
    #[error("edge #{edge} uses vertex {vertex} but only {n} vertices are declared")]
    VertexOutOfRange { edge: usize, vertex: Vertex, n: usize },
    #[error("edge #{second} duplicates edge #{first}")]
    DuplicateEdge { first: usize, second: usize },
    #[error("edge #{edge} has two vertices in class {class}")]
    NotRPartite { edge: usize, class: usize },
    #[error("partition must label each of the {n} vertices with a class below {r}")]
    BadPartition { n: usize, r: usize },
    #[error("expected a set of {expected} distinct vertices, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("hypergraph carries no r-partition")]
    NoPartition,
}

/// Where a recorded partition came from. Only supplied partitions are written
/// back out by the text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionSource {
    Supplied,
    Detected,
}

/// An r-uniform hypergraph on the dense vertex set `0..n`.
///
/// Edges are stored sorted and in insertion order. The shadow index is built
/// once on construction and never mutated; deletion happens on clones of it.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    edges: Vec<Vec<Vertex>>,
    edge_ids: HashMap<Vec<Vertex>, EdgeId>,
    partition: Option<Vec<usize>>,
    partition_source: Option<PartitionSource>,
    shadow: ShadowIndex,
}

impl Hypergraph {
    /// Validates and indexes an r-graph on `n` vertices.
    ///
    /// When no partition is given and `r == 2`, a bipartition is searched for
    /// and recorded if one exists. For `r >= 3` the caller has to supply it.
    pub fn new(
        r: usize,
        n: usize,
        edges: Vec<Vec<Vertex>>,
        partition: Option<Vec<usize>>,
    ) -> Result<Self, HypergraphError> {
        if r < 2 {
            return Err(HypergraphError::UniformityTooSmall(r));
        }
        let mut sorted_edges = Vec::with_capacity(edges.len());
        let mut edge_ids = HashMap::with_capacity(edges.len());
        for (idx, mut edge) in edges.into_iter().enumerate() {
            edge.sort_unstable();
            edge.dedup();
            if edge.len() != r {
                return Err(HypergraphError::NonUniformEdge { edge: idx, r });
            }
            if let Some(&vertex) = edge.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { edge: idx, vertex, n });
            }
            if let Some(&first) = edge_ids.get(&edge) {
                return Err(HypergraphError::DuplicateEdge { first, second: idx });
            }
            edge_ids.insert(edge.clone(), idx);
            sorted_edges.push(edge);
        }

        let (partition, partition_source) = match partition {
            Some(classes) => {
                check_partition(r, n, &sorted_edges, &classes)?;
                (Some(classes), Some(PartitionSource::Supplied))
            }
            None if r == 2 => match detect_bipartition(n, &sorted_edges) {
                Some(classes) => (Some(classes), Some(PartitionSource::Detected)),
                None => (None, None),
            },
            None => (None, None),
        };

        let shadow = ShadowIndex::build(r, &sorted_edges);
        Ok(Self {
            r,
            n,
            edges: sorted_edges,
            edge_ids,
            partition,
            partition_source,
            shadow,
        })
    }

    /// Like [`Hypergraph::new`] with `n` taken as one more than the largest vertex.
    pub fn from_edges(r: usize, edges: Vec<Vec<Vertex>>) -> Result<Self, HypergraphError> {
        let n = edges.iter().flatten().max().map_or(0, |&v| v + 1);
        Self::new(r, n, edges, None)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &[Vertex] {
        &self.edges[id]
    }

    /// Looks up an edge given its vertices in any order.
    pub fn edge_id(&self, vertices: &[Vertex]) -> Option<EdgeId> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.edge_ids.get(&key).copied()
    }

    pub fn contains_edge(&self, vertices: &[Vertex]) -> bool {
        self.edge_id(vertices).is_some()
    }

    pub fn partition(&self) -> Option<&[usize]> {
        self.partition.as_deref()
    }

    pub fn partition_source(&self) -> Option<PartitionSource> {
        self.partition_source
    }

    pub fn class_of(&self, v: Vertex) -> Option<usize> {
        self.partition.as_ref().map(|p| p[v])
    }

    pub fn shadow(&self) -> &ShadowIndex {
        &self.shadow
    }

    /// |∂H|
    pub fn shadow_size(&self) -> usize {
        self.shadow.len()
    }

    /// Number of edges containing the (r−1)-set `set`.
    pub fn codegree(&self, set: &[Vertex]) -> Result<usize, HypergraphError> {
        let mut key = set.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() != self.r - 1 || set.len() != self.r - 1 {
            return Err(HypergraphError::WrongArity {
                expected: self.r - 1,
                got: set.len(),
            });
        }
        Ok(self.shadow.id_of(&key).map_or(0, |id| self.shadow.codegree(id)))
    }

    /// `h_i`: the number of shadow elements avoiding class `i`, for each class.
    pub fn avoiding_shadow_counts(&self) -> Result<Vec<usize>, HypergraphError> {
        let partition = self.partition.as_ref().ok_or(HypergraphError::NoPartition)?;
        Ok(self.shadow.avoiding_counts(self.r, partition))
    }

    /// Vertices lying in at least one edge.
    pub fn non_isolated_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        for &v in self.edges.iter().flatten() {
            seen[v] = true;
        }
        seen.into_iter().filter(|&s| s).count()
    }

    /// The hypergraph on the same vertex set and partition keeping only the
    /// edges for which `keep` holds. Edge order is preserved.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(EdgeId) -> bool) -> Hypergraph {
        let edges = (0..self.edges.len())
            .filter(|&e| keep(e))
            .map(|e| self.edges[e].clone())
            .collect();
        self.with_edges_unchecked(edges)
    }

    /// Applies the vertex permutation `perm` (old id → new id).
    pub fn relabel(&self, perm: &[Vertex]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation must cover every vertex");
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v]).collect())
            .collect();
        let partition = self.partition.as_ref().map(|p| {
            let mut out = vec![0; self.n];
            for (v, &c) in p.iter().enumerate() {
                out[perm[v]] = c;
            }
            out
        });
        let mut relabeled = Self::new(self.r, self.n, edges, partition)
            .expect("relabeling preserves validity");
        relabeled.partition_source = self.partition_source;
        relabeled
    }

    fn with_edges_unchecked(&self, edges: Vec<Vec<Vertex>>) -> Hypergraph {
        let edge_ids = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let shadow = ShadowIndex::build(self.r, &edges);
        Hypergraph {
            r: self.r,
            n: self.n,
            edges,
            edge_ids,
            partition: self.partition.clone(),
            partition_source: self.partition_source,
            shadow,
        }
    }
}

fn check_partition(
    r: usize,
    n: usize,
    edges: &[Vec<Vertex>],
    classes: &[usize],
) -> Result<(), HypergraphError> {
    if classes.len() != n || classes.iter().any(|&c| c >= r) {
        return Err(HypergraphError::BadPartition { n, r });
    }
    let mut seen = vec![false; r];
    for (idx, edge) in edges.iter().enumerate() {
        seen.iter_mut().for_each(|s| *s = false);
        for &v in edge {
            let class = classes[v];
            if seen[class] {
                return Err(HypergraphError::NotRPartite { edge: idx, class });
            }
            seen[class] = true;
        }
    }
    Ok(())
}

/// Two-colours every component by BFS; isolated vertices land in class 0.
fn detect_bipartition(n: usize, edges: &[Vec<Vertex>]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let mut color: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &w in &adj[u] {
                match color[w] {
                    None => {
                        color[w] = Some(1 - cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(Option::unwrap).collect())
}

/// Index from each (r−1)-set of the shadow to the edges containing it.
///
/// Supports edge deletion: codegrees are live counts over the edges not yet
/// deleted, and a set whose codegree drops to zero leaves the shadow.
#[derive(Debug, Clone)]
pub struct ShadowIndex {
    sets: Vec<Vec<Vertex>>,
    lookup: HashMap<Vec<Vertex>, ShadowId>,
    // (edge, completing vertex) for every edge containing the set
    incident: Vec<Vec<(EdgeId, Vertex)>>,
    // faces[e][k] is the face of edge e omitting its k-th vertex
    faces: Vec<Vec<ShadowId>>,
    alive: Vec<bool>,
    live: Vec<usize>,
    live_sets: usize,
    live_edges: usize,
}

impl ShadowIndex {
    pub fn build(r: usize, edges: &[Vec<Vertex>]) -> Self {
        let mut index = ShadowIndex {
            sets: Vec::new(),
            lookup: HashMap::new(),
            incident: Vec::new(),
            faces: Vec::with_capacity(edges.len()),
            alive: vec![true; edges.len()],
            live: Vec::new(),
            live_sets: 0,
            live_edges: edges.len(),
        };
        let mut face = Vec::with_capacity(r - 1);
        for (e, edge) in edges.iter().enumerate() {
            let mut ids = Vec::with_capacity(r);
            for (k, &omitted) in edge.iter().enumerate() {
                face.clear();
                face.extend(edge.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v));
                let id = match index.lookup.get(&face) {
                    Some(&id) => id,
                    None => {
                        let id = index.sets.len();
                        index.sets.push(face.clone());
                        index.lookup.insert(face.clone(), id);
                        index.incident.push(Vec::new());
                        index.live.push(0);
                        index.live_sets += 1;
                        id
                    }
                };
                index.incident[id].push((e, omitted));
                index.live[id] += 1;
                ids.push(id);
            }
            index.faces.push(ids);
        }
        index
    }

    /// Number of sets currently in the shadow.
    pub fn len(&self) -> usize {
        self.live_sets
    }

    pub fn is_empty(&self) -> bool {
        self.live_sets == 0
    }

    /// Number of ids ever allocated, including sets that have since emptied.
    pub fn capacity(&self) -> usize {
        self.sets.len()
    }

    pub fn id_of(&self, set: &[Vertex]) -> Option<ShadowId> {
        self.lookup.get(set).copied()
    }

    pub fn set(&self, id: ShadowId) -> &[Vertex] {
        &self.sets[id]
    }

    pub fn codegree(&self, id: ShadowId) -> usize {
        self.live[id]
    }

    pub fn is_edge_alive(&self, e: EdgeId) -> bool {
        self.alive[e]
    }

    pub fn live_edge_count(&self) -> usize {
        self.live_edges
    }

    /// Faces of edge `e`, indexed by the position of the omitted vertex.
    pub fn faces_of(&self, e: EdgeId) -> &[ShadowId] {
        &self.faces[e]
    }

    /// Live `(edge, completing vertex)` pairs for the set `id`.
    pub fn completions(&self, id: ShadowId) -> impl Iterator<Item = (EdgeId, Vertex)> + '_ {
        self.incident[id].iter().copied().filter(|&(e, _)| self.alive[e])
    }

    /// Ids of the sets currently in the shadow.
    pub fn ids(&self) -> impl Iterator<Item = ShadowId> + '_ {
        (0..self.sets.len()).filter(|&id| self.live[id] > 0)
    }

    /// Deletes edge `e`; returns false if it was already gone.
    pub fn delete_edge(&mut self, e: EdgeId) -> bool {
        if !self.alive[e] {
            return false;
        }
        self.alive[e] = false;
        self.live_edges -= 1;
        for &id in &self.faces[e] {
            self.live[id] -= 1;
            if self.live[id] == 0 {
                self.live_sets -= 1;
            }
        }
        true
    }

    /// The class avoided by shadow set `id`, i.e. the class of any completion.
    pub fn avoided_class(&self, id: ShadowId, partition: &[usize]) -> usize {
        partition[self.incident[id][0].1]
    }

    pub fn avoiding_counts(&self, r: usize, partition: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; r];
        for id in self.ids() {
            counts[self.avoided_class(id, partition)] += 1;
        }
        counts
    }

    /// Live shadow as an ordered map from set to its completing vertices.
    pub fn snapshot(&self) -> BTreeMap<Vec<Vertex>, BTreeSet<Vertex>> {
        self.ids()
            .map(|id| {
                let completions = self.completions(id).map(|(_, v)| v).collect();
                (self.sets[id].clone(), completions)
            })
            .collect()
    }
}
