//! Codegree peeling of r-partite r-graphs.
//!
//! Host classes are paired with thresholds `t_i` so that the smallest
//! threshold goes to the class avoided by the most shadow sets. Peeling then
//! repeatedly picks a shadow set `S` avoiding class `i` whose codegree is
//! positive but below `t_i` and deletes every edge through `S`. The surviving
//! edge set is the largest subset meeting all codegree targets, so it does
//! not depend on the order in which violated sets are processed.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, ShadowId, ShadowIndex, Vertex};
use crate::tight_tree::TightTree;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeelError {
    #[error("thresholds must be positive and at least two in number")]
    InvalidThresholds,
    #[error("{thresholds} thresholds given for a {r}-graph")]
    ArityMismatch { thresholds: usize, r: usize },
    #[error("host hypergraph carries no r-partition")]
    NoPartition,
    #[error("host graph is not bipartite")]
    NotBipartite,
}

/// Per-class codegree targets `(t_1, …, t_r)`, with implied tree size
/// `t = Σ t_i − (r − 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thresholds {
    values: Vec<usize>,
}

impl Thresholds {
    pub fn new(values: Vec<usize>) -> Result<Self, PeelError> {
        if values.len() < 2 || values.contains(&0) {
            return Err(PeelError::InvalidThresholds);
        }
        Ok(Thresholds { values })
    }

    /// The class sizes of the tree's canonical partition.
    pub fn from_tree(tree: &TightTree) -> Self {
        Thresholds { values: tree.canonical_partition().sizes }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn r(&self) -> usize {
        self.values.len()
    }

    pub fn t(&self) -> usize {
        self.values.iter().sum::<usize>() + 1 - self.r()
    }
}

/// Pairing of host classes with thresholds, plus the quantities the pairing
/// is derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelingPlan {
    thresholds: Thresholds,
    /// host class → threshold index
    threshold_of_class: Vec<usize>,
    /// threshold index → host class
    class_of_threshold: Vec<usize>,
    /// host classes in pairing order (thresholds ascending, h descending)
    order: Vec<usize>,
    /// h_i indexed by host class
    h: Vec<usize>,
    /// t_i − (t+r−1)/r along the pairing order
    deltas: Vec<Rational>,
    i_star: usize,
}

impl PeelingPlan {
    pub fn thresholds(&self) -> &Thresholds {
        &self.thresholds
    }

    /// Codegree target for shadow sets avoiding host class `class`.
    pub fn class_threshold(&self, class: usize) -> usize {
        self.thresholds.values[self.threshold_of_class[class]]
    }

    pub fn threshold_index_of_class(&self, class: usize) -> usize {
        self.threshold_of_class[class]
    }

    pub fn class_of_threshold(&self, index: usize) -> usize {
        self.class_of_threshold[index]
    }

    pub fn pairing_order(&self) -> &[usize] {
        &self.order
    }

    pub fn avoiding_counts(&self) -> &[usize] {
        &self.h
    }

    /// h values along the pairing order; nonincreasing.
    pub fn paired_avoiding_counts(&self) -> Vec<usize> {
        self.order.iter().map(|&c| self.h[c]).collect()
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    /// Number of leading nonpositive deltas along the pairing order.
    pub fn i_star(&self) -> usize {
        self.i_star
    }

    /// `Σ (t_i − 1) h_i` over the pairing.
    pub fn deletion_budget(&self) -> usize {
        (0..self.h.len()).map(|c| (self.class_threshold(c) - 1) * self.h[c]).sum()
    }
}

/// Pairs the smallest thresholds with the host classes avoided by the most
/// shadow sets; ties fall back to index order on both sides.
pub fn assign_labels(h: &Hypergraph, thresholds: &Thresholds) -> Result<PeelingPlan, PeelError> {
    let r = h.r();
    if thresholds.r() != r {
        return Err(PeelError::ArityMismatch { thresholds: thresholds.r(), r });
    }
    let counts = h.avoiding_shadow_counts().map_err(|_| PeelError::NoPartition)?;

    let mut by_threshold: Vec<usize> = (0..r).collect();
    by_threshold.sort_by_key(|&i| (thresholds.values[i], i));
    let mut by_h: Vec<usize> = (0..r).collect();
    by_h.sort_by_key(|&c| (std::cmp::Reverse(counts[c]), c));

    let mut threshold_of_class = vec![0; r];
    let mut class_of_threshold = vec![0; r];
    for (&ti, &class) in by_threshold.iter().zip(&by_h) {
        threshold_of_class[class] = ti;
        class_of_threshold[ti] = class;
    }

    let total = (thresholds.t() + r - 1) as i128;
    let deltas: Vec<Rational> = by_threshold
        .iter()
        .map(|&ti| Rational::from_integer(thresholds.values[ti] as i128) - Rational::new(total, r as i128))
        .collect();
    let i_star = deltas.iter().take_while(|d| **d <= Rational::zero()).count();

    Ok(PeelingPlan {
        thresholds: thresholds.clone(),
        threshold_of_class,
        class_of_threshold,
        order: by_h,
        h: counts,
        deltas,
        i_star,
    })
}

/// Order in which violated shadow sets are taken off the worklist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorklistOrder {
    /// Smallest `(class, S)` first.
    Canonical,
    /// Uniformly random violated set, seeded.
    Random(u64),
}

/// One deletion: every edge through `set` was removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(rename = "S")]
    pub set: Vec<Vertex>,
    /// Class avoided by `set`; absent for unpartitioned peeling.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avoids: Option<usize>,
    pub removed: Vec<Vec<Vertex>>,
    #[serde(skip)]
    pub removed_ids: Vec<EdgeId>,
}

#[derive(Debug, Clone)]
pub struct PeelResult {
    /// Ids (into the input hypergraph) of the surviving edges, ascending.
    pub surviving: Vec<EdgeId>,
    pub trace: Vec<TraceStep>,
    pub emptied: bool,
    index: ShadowIndex,
}

impl PeelResult {
    /// The live shadow index of the survivors.
    pub fn shadow(&self) -> &ShadowIndex {
        &self.index
    }

    /// The surviving edges as a hypergraph on the input's vertex set.
    pub fn subgraph(&self, h: &Hypergraph) -> Hypergraph {
        h.edge_subgraph(|e| self.index.is_edge_alive(e))
    }

    pub fn surviving_edges<'a>(&'a self, h: &'a Hypergraph) -> impl Iterator<Item = &'a [Vertex]> + 'a {
        self.surviving.iter().map(move |&e| h.edge(e))
    }

    /// Trace as JSON lines.
    pub fn trace_json_lines(&self) -> String {
        self.trace
            .iter()
            .map(|s| serde_json::to_string(s).expect("trace serialisation cannot fail") + "\n")
            .collect()
    }
}

/// Runs the deletion rule to its fixed point with the canonical worklist.
pub fn peel(h: &Hypergraph, plan: &PeelingPlan) -> Result<PeelResult, PeelError> {
    peel_with_order(h, plan, WorklistOrder::Canonical)
}

pub fn peel_with_order(
    h: &Hypergraph,
    plan: &PeelingPlan,
    order: WorklistOrder,
) -> Result<PeelResult, PeelError> {
    let partition = h.partition().ok_or(PeelError::NoPartition)?;
    if plan.h.len() != h.r() {
        return Err(PeelError::ArityMismatch { thresholds: plan.h.len(), r: h.r() });
    }
    let index = h.shadow();
    let class_of: Vec<usize> = (0..index.capacity()).map(|id| index.avoided_class(id, partition)).collect();
    let target: Vec<usize> = class_of.iter().map(|&c| plan.class_threshold(c)).collect();
    Ok(run(h, order, |id| target[id], |id| Some(class_of[id])))
}

/// Peeling without classes: every shadow set must reach codegree `threshold`.
pub fn peel_uniform(h: &Hypergraph, threshold: usize) -> PeelResult {
    run(h, WorklistOrder::Canonical, |_| threshold, |_| None)
}

fn run(
    h: &Hypergraph,
    order: WorklistOrder,
    target: impl Fn(ShadowId) -> usize,
    class: impl Fn(ShadowId) -> Option<usize>,
) -> PeelResult {
    let mut index = h.shadow().clone();
    let violated = |index: &ShadowIndex, id: ShadowId| {
        let c = index.codegree(id);
        c > 0 && c < target(id)
    };
    let mut worklist = Worklist::new(order, index.capacity());
    for id in 0..index.capacity() {
        if violated(&index, id) {
            worklist.push(id, class(id), index.set(id));
        }
    }

    let mut trace = Vec::new();
    while let Some(id) = worklist.pop() {
        if !violated(&index, id) {
            continue;
        }
        let removed_ids: Vec<EdgeId> = index.completions(id).map(|(e, _)| e).collect();
        for &e in &removed_ids {
            index.delete_edge(e);
            for k in 0..h.r() {
                let face = index.faces_of(e)[k];
                if violated(&index, face) {
                    worklist.push(face, class(face), index.set(face));
                }
            }
        }
        trace.push(TraceStep {
            set: index.set(id).to_vec(),
            avoids: class(id),
            removed: removed_ids.iter().map(|&e| h.edge(e).to_vec()).collect(),
            removed_ids,
        });
    }

    let surviving: Vec<EdgeId> = (0..h.edge_count()).filter(|&e| index.is_edge_alive(e)).collect();
    PeelResult { emptied: surviving.is_empty(), surviving, trace, index }
}

enum Worklist {
    Canonical { queue: BTreeSet<(usize, Vec<Vertex>, ShadowId)>, queued: Vec<bool> },
    Random { pool: Vec<ShadowId>, queued: Vec<bool>, rng: ChaCha8Rng },
}

impl Worklist {
    fn new(order: WorklistOrder, capacity: usize) -> Self {
        match order {
            WorklistOrder::Canonical => {
                Worklist::Canonical { queue: BTreeSet::new(), queued: vec![false; capacity] }
            }
            WorklistOrder::Random(seed) => Worklist::Random {
                pool: Vec::new(),
                queued: vec![false; capacity],
                rng: ChaCha8Rng::seed_from_u64(seed),
            },
        }
    }

    fn push(&mut self, id: ShadowId, class: Option<usize>, set: &[Vertex]) {
        match self {
            Worklist::Canonical { queue, queued } => {
                if !std::mem::replace(&mut queued[id], true) {
                    queue.insert((class.unwrap_or(0), set.to_vec(), id));
                }
            }
            Worklist::Random { pool, queued, .. } => {
                if !std::mem::replace(&mut queued[id], true) {
                    pool.push(id);
                }
            }
        }
    }

    fn pop(&mut self) -> Option<ShadowId> {
        match self {
            Worklist::Canonical { queue, .. } => queue.pop_first().map(|(_, _, id)| id),
            Worklist::Random { pool, rng, .. } => {
                if pool.is_empty() {
                    None
                } else {
                    let k = rng.gen_range(0..pool.len());
                    Some(pool.swap_remove(k))
                }
            }
        }
    }
}

/// Whether every shadow set of `h_prime` avoiding host class `i` lies in at
/// least `t_i` edges, with `t_i` taken from the plan's pairing.
pub fn check_codegree_condition(h_prime: &Hypergraph, plan: &PeelingPlan) -> Result<bool, PeelError> {
    let partition = h_prime.partition().ok_or(PeelError::NoPartition)?;
    let index = h_prime.shadow();
    Ok(index
        .ids()
        .all(|id| index.codegree(id) >= plan.class_threshold(index.avoided_class(id, partition))))
}

/// `r·|E| > (t−1)·|∂H|`, i.e. more than `(t−1)/r·|∂H|` edges.
pub fn exceeds_density_bound(h: &Hypergraph, t: usize) -> bool {
    h.r() * h.edge_count() > (t.saturating_sub(1)) * h.shadow_size()
}

/// Checks the trace against the deletion rule's bookkeeping: each set is
/// used once, each step removes between 1 and `t_i − 1` edges, removals
/// account exactly for the lost edges, and `|E(H)| ≤ |E| + Σ (t_i − 1) h_i`.
pub fn trace_ledger_holds(h: &Hypergraph, plan: &PeelingPlan, result: &PeelResult) -> bool {
    let mut seen = BTreeSet::new();
    let mut removed_total = 0;
    for step in &result.trace {
        let Some(class) = step.avoids else { return false };
        let limit = plan.class_threshold(class) - 1;
        if !seen.insert(step.set.clone()) || step.removed.is_empty() || step.removed.len() > limit {
            return false;
        }
        removed_total += step.removed.len();
    }
    removed_total + result.surviving.len() == h.edge_count()
        && h.edge_count() <= result.surviving.len() + plan.deletion_budget()
}

/// The graph case: keeps a nonempty subgraph in which each side meets the
/// degree targets whenever the average degree exceeds `t1 + t2 − 2`.
pub fn bipartite_min_degree_subgraph(g: &Hypergraph, t1: usize, t2: usize) -> Result<PeelResult, PeelError> {
    if g.r() != 2 || g.partition().is_none() {
        return Err(PeelError::NotBipartite);
    }
    let plan = assign_labels(g, &Thresholds::new(vec![t1, t2])?)?;
    peel(g, &plan)
}
