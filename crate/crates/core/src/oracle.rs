//! Exhaustive containment deciders, used as ground truth on small inputs.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use crate::embedder::{verify_embedding, Embedding};
use crate::hypergraph::{EdgeId, Hypergraph, Vertex};
use crate::tight_tree::{Step, TightTree};

/// Limits on a search. Running out is reported, never treated as absence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_time: Duration) -> Self {
        assert!(max_nodes > 0 && !max_time.is_zero(), "search budget must be positive");
        SearchBudget { max_nodes, max_time }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 50_000_000, max_time: Duration::from_secs(60) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict<T> {
    Found(T),
    Absent,
    BudgetExhausted,
}

impl<T> OracleVerdict<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, OracleVerdict::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, OracleVerdict::Absent)
    }

    pub fn found(self) -> Option<T> {
        match self {
            OracleVerdict::Found(x) => Some(x),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleVerdict::Found(_) => "found",
            OracleVerdict::Absent => "absent",
            OracleVerdict::BudgetExhausted => "budget_exhausted",
        }
    }
}

struct Meter {
    budget: SearchBudget,
    start: Instant,
    nodes: u64,
    exhausted: bool,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Meter { budget, start: Instant::now(), nodes: 0, exhausted: false }
    }

    /// Counts a node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes % 4096 == 0 && self.start.elapsed() > self.budget.max_time)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

/// Decides whether `tree` embeds into `host` by backtracking over the tree's
/// construction order. Candidates for each new vertex are the completions of
/// the image of its spine; after each placement, later steps whose spine is
/// now fully placed must still have a free completion.
pub fn contains_tree(host: &Hypergraph, tree: &TightTree, budget: SearchBudget) -> OracleVerdict<Embedding> {
    if tree.r() != host.r() || host.non_isolated_count() < tree.vertex_count() {
        return OracleVerdict::Absent;
    }
    let r = tree.r();
    let order = tree.vertex_order();
    let position: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // spines in positions, and lookahead checks keyed by the position that completes them
    let spines: Vec<Vec<usize>> = tree
        .steps()
        .iter()
        .map(|s| TightTree::spine(s).map(|v| position[&v]).collect())
        .collect();
    let mut checks_after = vec![Vec::new(); order.len()];
    for (j, spine) in spines.iter().enumerate() {
        let ready = *spine.iter().max().unwrap();
        checks_after[ready].push(j);
    }

    let mut search = TreeSearchState {
        host,
        spines: &spines,
        checks_after: &checks_after,
        r,
        image: vec![usize::MAX; order.len()],
        occupied: vec![false; host.vertex_count()],
        meter: Meter::new(budget),
    };

    let mut perm: Vec<usize> = (0..r).collect();
    for edge in host.edges() {
        loop {
            if !search.meter.tick() {
                return OracleVerdict::BudgetExhausted;
            }
            for (k, &p) in perm.iter().enumerate() {
                search.image[k] = edge[p];
                search.occupied[edge[p]] = true;
            }
            let root_ok = (0..r).all(|k| search.lookahead(k));
            if root_ok && search.descend(0) {
                let map: BTreeMap<Vertex, Vertex> =
                    order.iter().zip(&search.image).map(|(&tv, &hv)| (tv, hv)).collect();
                debug_assert!(verify_embedding(host, tree, &map));
                return OracleVerdict::Found(Embedding::from_map(map));
            }
            if search.meter.exhausted {
                return OracleVerdict::BudgetExhausted;
            }
            for &p in &perm {
                search.occupied[edge[p]] = false;
            }
            if !next_permutation(&mut perm) {
                perm.sort_unstable();
                break;
            }
        }
    }
    OracleVerdict::Absent
}

struct TreeSearchState<'a> {
    host: &'a Hypergraph,
    spines: &'a [Vec<usize>],
    checks_after: &'a [Vec<usize>],
    r: usize,
    image: Vec<Vertex>,
    occupied: Vec<bool>,
    meter: Meter,
}

impl TreeSearchState<'_> {
    fn spine_image(&self, step: usize) -> Vec<Vertex> {
        let mut s: Vec<Vertex> = self.spines[step].iter().map(|&p| self.image[p]).collect();
        s.sort_unstable();
        s
    }

    /// Every later step whose spine was completed by position `pos` still has
    /// a free completion.
    fn lookahead(&self, pos: usize) -> bool {
        let index = self.host.shadow();
        self.checks_after[pos].iter().all(|&j| {
            index
                .id_of(&self.spine_image(j))
                .is_some_and(|id| index.completions(id).any(|(_, w)| !self.occupied[w]))
        })
    }

    fn descend(&mut self, step: usize) -> bool {
        if step == self.spines.len() {
            return true;
        }
        let index = self.host.shadow();
        let Some(id) = index.id_of(&self.spine_image(step)) else { return false };
        let candidates: Vec<Vertex> = index.completions(id).map(|(_, w)| w).filter(|&w| !self.occupied[w]).collect();
        let pos = self.r + step;
        for w in candidates {
            if !self.meter.tick() {
                return false;
            }
            self.image[pos] = w;
            self.occupied[w] = true;
            if self.lookahead(pos) && self.descend(step + 1) {
                return true;
            }
            self.occupied[w] = false;
            if self.meter.exhausted {
                return false;
            }
        }
        self.image[pos] = usize::MAX;
        false
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Does `host` contain some tight tree with `t` edges all of whose classes
/// have at least `min_class` vertices? Shortcut for [`TreeSearch`].
pub fn contains_any_tight_tree(
    host: &Hypergraph,
    t: usize,
    min_class: usize,
    budget: SearchBudget,
) -> OracleVerdict<TightTree> {
    TreeSearch::new(host, t, min_class).budget(budget).run()
}

/// Grows tight trees edge by edge inside the host and looks for one with `t`
/// edges and every class of size at least `min_class`.
///
/// A branch is cut when the remaining edges cannot cover the class deficits
/// (each edge adds one vertex to one class). Edge sets already explored are
/// not revisited, since extensions depend only on the edge set.
pub struct TreeSearch<'a> {
    host: &'a Hypergraph,
    t: usize,
    min_class: usize,
    budget: SearchBudget,
    purity_groups: Option<&'a [usize]>,
}

impl<'a> TreeSearch<'a> {
    pub fn new(host: &'a Hypergraph, t: usize, min_class: usize) -> Self {
        assert!(t >= 1 && min_class >= 1);
        TreeSearch { host, t, min_class, budget: SearchBudget::default(), purity_groups: None }
    }

    pub fn budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    /// Additionally cut any branch whose tree puts vertices of two different
    /// groups into the same class.
    pub fn prune_mixed_classes(mut self, groups: &'a [usize]) -> Self {
        self.purity_groups = Some(groups);
        self
    }

    pub fn run(&self) -> OracleVerdict<TightTree> {
        let r = self.host.r();
        if self.host.non_isolated_count() < self.t + r - 1 {
            return OracleVerdict::Absent;
        }
        let mut grow = Grow {
            search: self,
            edges: Vec::new(),
            steps: Vec::new(),
            class_of: vec![None; self.host.vertex_count()],
            class_count: vec![0; r],
            class_group: vec![None; r],
            visited: HashSet::new(),
            meter: Meter::new(self.budget),
        };
        for e in 0..self.host.edge_count() {
            if !grow.meter.tick() {
                return OracleVerdict::BudgetExhausted;
            }
            let root = self.host.edge(e).to_vec();
            let mut group_marks = Vec::new();
            let mut ok = true;
            for (class, &v) in root.iter().enumerate() {
                grow.class_of[v] = Some(class);
                grow.class_count[class] += 1;
                match grow.mark_group(class, v) {
                    Some(marked) => group_marks.push(marked),
                    None => ok = false,
                }
            }
            grow.edges.push(e);
            if ok && grow.extend() {
                let steps = std::mem::take(&mut grow.steps);
                let tree = TightTree::new(r, root, steps).expect("grown trees are valid");
                return OracleVerdict::Found(tree);
            }
            if grow.meter.exhausted {
                return OracleVerdict::BudgetExhausted;
            }
            grow.edges.pop();
            for (class, &v) in root.iter().enumerate() {
                grow.class_of[v] = None;
                grow.class_count[class] -= 1;
            }
            for (class, marked) in group_marks.into_iter().enumerate() {
                if marked {
                    grow.class_group[class] = None;
                }
            }
        }
        OracleVerdict::Absent
    }
}

struct Grow<'s, 'a> {
    search: &'s TreeSearch<'a>,
    edges: Vec<EdgeId>,
    steps: Vec<Step>,
    class_of: Vec<Option<usize>>,
    class_count: Vec<usize>,
    class_group: Vec<Option<usize>>,
    visited: HashSet<Vec<EdgeId>>,
    meter: Meter,
}

impl Grow<'_, '_> {
    /// Records `v`'s group for `class`. `None` if that mixes groups,
    /// otherwise whether this call set the class's group.
    fn mark_group(&mut self, class: usize, v: Vertex) -> Option<bool> {
        let Some(groups) = self.search.purity_groups else { return Some(false) };
        match self.class_group[class] {
            None => {
                self.class_group[class] = Some(groups[v]);
                Some(true)
            }
            Some(g) if g == groups[v] => Some(false),
            Some(_) => None,
        }
    }

    fn deficit(&self) -> usize {
        self.class_count.iter().map(|&c| self.search.min_class.saturating_sub(c)).sum()
    }

    fn extend(&mut self) -> bool {
        let remaining = self.search.t - self.edges.len();
        if self.deficit() > remaining {
            return false;
        }
        if remaining == 0 {
            return true;
        }
        let mut key = self.edges.clone();
        key.sort_unstable();
        if !self.visited.insert(key) {
            return false;
        }

        let host = self.search.host;
        let index = host.shadow();
        let mut face = Vec::with_capacity(host.r() - 1);
        for u in 0..self.edges.len() {
            let witness_edge = host.edge(self.edges[u]);
            for omit in 0..host.r() {
                face.clear();
                face.extend(witness_edge.iter().enumerate().filter(|&(k, _)| k != omit).map(|(_, &v)| v));
                let class = self.class_of[witness_edge[omit]].expect("tree vertices carry classes");
                let id = index.id_of(&face).expect("faces of host edges are in the shadow");
                let candidates: Vec<(EdgeId, Vertex)> =
                    index.completions(id).filter(|&(_, w)| self.class_of[w].is_none()).collect();
                for (e, w) in candidates {
                    if !self.meter.tick() {
                        return false;
                    }
                    let Some(marked) = self.mark_group(class, w) else { continue };
                    self.class_of[w] = Some(class);
                    self.class_count[class] += 1;
                    self.edges.push(e);
                    self.steps.push(Step { edge: host.edge(e).to_vec(), new: w, witness: u + 1 });
                    if self.extend() {
                        return true;
                    }
                    self.steps.pop();
                    self.edges.pop();
                    self.class_count[class] -= 1;
                    self.class_of[w] = None;
                    if marked {
                        self.class_group[class] = None;
                    }
                    if self.meter.exhausted {
                        return false;
                    }
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tight_tree::tight_path;

    fn k23() -> Hypergraph {
        let edges = (0..2).flat_map(|a| (2..5).map(move |b| vec![a, b])).collect();
        Hypergraph::new(2, 5, edges, Some(vec![0, 0, 1, 1, 1])).unwrap()
    }

    fn matching() -> Hypergraph {
        Hypergraph::from_edges(2, vec![vec![0, 1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn contains_tree_examples() {
        let p3 = tight_path(2, 3);
        assert!(contains_tree(&matching(), &p3, SearchBudget::default()).is_absent());
        let OracleVerdict::Found(e) = contains_tree(&k23(), &p3, SearchBudget::default()) else { panic!() };
        assert!(verify_embedding(&k23(), &p3, e.map()));
        let tiny = Hypergraph::from_edges(3, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert!(contains_tree(&tiny, &tight_path(3, 3), SearchBudget::default()).is_absent());
    }

    #[test]
    fn any_tree_examples() {
        assert!(contains_any_tight_tree(&matching(), 3, 2, SearchBudget::default()).is_absent());
        let OracleVerdict::Found(tree) = contains_any_tight_tree(&k23(), 3, 2, SearchBudget::default()) else {
            panic!()
        };
        assert_eq!(tree.edge_count(), 3);
        assert!(tree.canonical_partition().sizes.iter().all(|&s| s >= 2));
        assert!(tree.edges().all(|e| k23().contains_edge(e)));

        let empty = Hypergraph::new(2, 3, vec![], None).unwrap();
        assert!(contains_any_tight_tree(&empty, 1, 1, SearchBudget::default()).is_absent());
        assert!(contains_any_tight_tree(&matching(), 1, 1, SearchBudget::default()).is_found());
    }

    #[test]
    fn budget_is_reported() {
        let k = Hypergraph::from_edges(2, (0..8).flat_map(|a| (8..16).map(move |b| vec![a, b])).collect()).unwrap();
        let tiny = SearchBudget::new(3, Duration::from_secs(10));
        assert_eq!(contains_tree(&k, &tight_path(2, 9), tiny), OracleVerdict::BudgetExhausted);
        assert_eq!(contains_any_tight_tree(&k, 9, 5, tiny), OracleVerdict::BudgetExhausted);
    }

    #[test]
    fn permutations_enumerate() {
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
