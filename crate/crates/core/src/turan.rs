//! Tree containment in ordinary graphs through a large 2-cut.
//!
//! A local-search 2-cut turns the host into a bipartite graph; when the cut
//! has more than `(t−1)/2` edges per non-isolated vertex, the r-partite
//! embedder is guaranteed to find the tree there. Otherwise the exact oracle
//! decides on the original graph.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::embedder::{self, EmbedError, EmbedOutcome, Embedding};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::oracle::{self, OracleVerdict, SearchBudget};
use crate::tight_tree::TightTree;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TuranError {
    #[error("expected a graph (2-uniform), got uniformity {0}")]
    NotAGraph(usize),
    #[error("parameter out of range: {0}")]
    InvalidParameter(&'static str),
    #[error("cut graph met the embedding trigger but embedding failed: {0}")]
    GuaranteeViolated(EmbedError),
    #[error("embedding returned by the pipeline does not verify against the host")]
    UnverifiedEmbedding,
}

/// Edge count above which every `n`-vertex graph contains every tree with
/// `t` edges: `t(t−1)n/(t+1)` for odd `t`, `(t−1)²n/t` for even `t`.
pub fn turan_threshold(n: usize, t: usize) -> Rational {
    assert!(t >= 1, "trees have at least one edge");
    let (n, t) = (n as i128, t as i128);
    let factor = if t % 2 == 1 {
        Rational::one() - Rational::new(1, t + 1)
    } else {
        Rational::one() - Rational::new(1, t)
    };
    factor * Rational::from_integer((t - 1) * n)
}

/// Cut size guaranteed in `m`-edge graphs avoiding a fixed `t`-edge tree:
/// `m/2 + m/(2t)` for odd `t`, `m/2 + m/(2t−2)` for even `t`. Reference
/// value only; local search is not promised to reach it.
pub fn aks_cut_lower_bound(m: usize, t: usize) -> Result<Rational, TuranError> {
    if t <= 1 {
        return Err(TuranError::InvalidParameter("t must exceed 1"));
    }
    let (m, t) = (m as i128, t as i128);
    let extra = if t % 2 == 1 { Rational::new(m, 2 * t) } else { Rational::new(m, 2 * t - 2) };
    Ok(Rational::new(m, 2) + extra)
}

/// `r!/r^r`, the probability that a uniform r-colouring splits a fixed
/// r-set across all colours.
pub fn expected_r_cut_fraction(r: usize) -> Result<Rational, TuranError> {
    if !(2..=24).contains(&r) {
        return Err(TuranError::InvalidParameter("r must lie in 2..=24"));
    }
    Ok((1..=r as i128).fold(Rational::one(), |acc, k| acc * Rational::new(k, r as i128)))
}

/// A bipartition with crossing bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub sides: Vec<u8>,
    pub size: usize,
    pub crossing_degree: Vec<usize>,
}

impl Cut {
    pub fn from_sides(g: &Hypergraph, sides: Vec<u8>) -> Cut {
        let mut crossing_degree = vec![0; g.vertex_count()];
        let mut size = 0;
        for e in g.edges() {
            if sides[e[0]] != sides[e[1]] {
                size += 1;
                crossing_degree[e[0]] += 1;
                crossing_degree[e[1]] += 1;
            }
        }
        Cut { sides, size, crossing_degree }
    }

    /// Crossing edges as a bipartite graph on the same vertex set, with the
    /// cut sides as its partition.
    pub fn crossing_graph(&self, g: &Hypergraph) -> Hypergraph {
        let edges = g.edges().iter().filter(|e| self.sides[e[0]] != self.sides[e[1]]).cloned().collect();
        let partition = self.sides.iter().map(|&s| s as usize).collect();
        Hypergraph::new(2, g.vertex_count(), edges, Some(partition)).expect("crossing edges respect the cut")
    }
}

fn degrees(g: &Hypergraph) -> Vec<usize> {
    let mut deg = vec![0; g.vertex_count()];
    for e in g.edges() {
        deg[e[0]] += 1;
        deg[e[1]] += 1;
    }
    deg
}

fn adjacency(g: &Hypergraph) -> Vec<Vec<Vertex>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    adj
}

/// Best of `restarts` local searches from seeded random bipartitions. Each
/// search flips the lowest-id vertex with fewer than half its edges crossing
/// until none is left, so every vertex ends with crossing degree at least
/// half its degree. Ties between restarts go to the least side vector.
pub fn local_search_two_cut(g: &Hypergraph, seed: u64, restarts: usize) -> Result<Cut, TuranError> {
    if g.r() != 2 {
        return Err(TuranError::NotAGraph(g.r()));
    }
    let adj = adjacency(g);
    let deg = degrees(g);
    let best = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart);
            let sides: Vec<u8> = (0..g.vertex_count()).map(|_| rng.gen_range(0..2)).collect();
            improve(g, &adj, &deg, sides)
        })
        .reduce_with(|a, b| match a.size.cmp(&b.size) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => {
                if a.sides <= b.sides {
                    a
                } else {
                    b
                }
            }
        })
        .expect("at least one restart");
    Ok(best)
}

fn improve(g: &Hypergraph, adj: &[Vec<Vertex>], deg: &[usize], sides: Vec<u8>) -> Cut {
    let mut cut = Cut::from_sides(g, sides);
    loop {
        let Some(v) = (0..g.vertex_count()).find(|&v| 2 * cut.crossing_degree[v] < deg[v]) else {
            return cut;
        };
        cut.sides[v] ^= 1;
        let gained = deg[v] - cut.crossing_degree[v];
        cut.size = cut.size + gained - cut.crossing_degree[v];
        cut.crossing_degree[v] = gained;
        for &w in &adj[v] {
            if cut.sides[w] != cut.sides[v] {
                cut.crossing_degree[w] += 1;
            } else {
                cut.crossing_degree[w] -= 1;
            }
        }
    }
}

/// Pipeline settings.
#[derive(Debug, Clone, Copy)]
pub struct PipelineConfig {
    pub seed: u64,
    pub restarts: usize,
    pub budget: SearchBudget,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { seed: 0, restarts: 32, budget: SearchBudget::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PipelineVerdict {
    Found,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub verdict: PipelineVerdict,
    pub cut_size: usize,
    /// Whether the cut exceeded `(t−1)/2` times its non-isolated vertex count.
    pub trigger: bool,
    /// Number of vertices touched by the cut.
    pub cut_vertices: usize,
    /// Edge count beyond which the tree is guaranteed, as a decimal string.
    pub threshold: String,
    pub above_threshold: bool,
    pub used_fallback: bool,
    /// Oracle verdict on the original graph, when consulted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Embedding>,
}

/// Cut, then embed into the crossing graph when the density trigger fires,
/// otherwise fall back to the exact oracle on `g`. Found embeddings are
/// checked against `g`.
pub fn embed_tree_via_cut(g: &Hypergraph, tree: &TightTree, config: PipelineConfig) -> Result<PipelineReport, TuranError> {
    if g.r() != 2 {
        return Err(TuranError::NotAGraph(g.r()));
    }
    if tree.r() != 2 {
        return Err(TuranError::NotAGraph(tree.r()));
    }
    let t = tree.edge_count();
    let threshold = turan_threshold(g.vertex_count(), t);
    let above_threshold = Rational::from_integer(g.edge_count() as i128) > threshold;
    let cut = local_search_two_cut(g, config.seed, config.restarts)?;
    let crossing = cut.crossing_graph(g);
    let cut_vertices = crossing.non_isolated_count();
    let trigger = 2 * cut.size > (t - 1) * cut_vertices;

    let mut report = PipelineReport {
        verdict: PipelineVerdict::Inconclusive,
        cut_size: cut.size,
        trigger,
        cut_vertices,
        threshold: decimal(threshold),
        above_threshold,
        used_fallback: false,
        oracle: None,
        embedding: None,
    };

    if trigger {
        match embedder::embed(&crossing, tree) {
            Ok(EmbedOutcome::Found(e)) => {
                if !embedder::verify_embedding(g, tree, e.map()) {
                    return Err(TuranError::UnverifiedEmbedding);
                }
                report.verdict = PipelineVerdict::Found;
                report.embedding = Some(e);
                return Ok(report);
            }
            Ok(EmbedOutcome::Inconclusive(_)) => {
                return Err(TuranError::GuaranteeViolated(EmbedError::LemmaViolated {
                    edges: crossing.edge_count(),
                    shadow: crossing.shadow_size(),
                    t,
                }))
            }
            Err(err) => return Err(TuranError::GuaranteeViolated(err)),
        }
    }

    report.used_fallback = true;
    let verdict = oracle::contains_tree(g, tree, config.budget);
    report.oracle = Some(verdict.name());
    if let OracleVerdict::Found(e) = verdict {
        debug_assert!(embedder::verify_embedding(g, tree, e.map()));
        report.verdict = PipelineVerdict::Found;
        report.embedding = Some(e);
    }
    Ok(report)
}

/// Exact rational as a decimal string, rounded to six places when needed.
pub fn decimal(x: Rational) -> String {
    if x.is_integer() {
        return x.to_integer().to_string();
    }
    let scaled = (x * Rational::from_integer(1_000_000)).round().to_integer();
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    let s = format!("{sign}{}.{:06}", abs / 1_000_000, abs % 1_000_000);
    s.trim_end_matches('0').to_string()
}

/// Monte-Carlo estimate of the fraction of edges crossing a uniform r-cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutFractionEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub expected: f64,
    pub samples: usize,
}

impl CutFractionEstimate {
    pub fn z_score(&self) -> f64 {
        if self.std_error.is_zero() {
            0.0
        } else {
            (self.mean - self.expected) / self.std_error
        }
    }
}

/// Samples a random r-graph (`n` vertices, `m` distinct edges) and a uniform
/// r-colouring per sample; records the fraction of edges meeting all colours.
pub fn sample_r_cut_fraction(r: usize, n: usize, m: usize, samples: usize, seed: u64) -> Result<CutFractionEstimate, TuranError> {
    let expected = expected_r_cut_fraction(r)?;
    if n < r || m == 0 || samples < 2 {
        return Err(TuranError::InvalidParameter("need n >= r, m >= 1 and at least two samples"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut colour = vec![0usize; n];
    let mut seen = vec![false; r];
    for _ in 0..samples {
        let edges = random_edges(r, n, m, &mut rng);
        colour.iter_mut().for_each(|c| *c = rng.gen_range(0..r));
        let crossing = edges
            .iter()
            .filter(|e| {
                seen.iter_mut().for_each(|s| *s = false);
                e.iter().all(|&v| !std::mem::replace(&mut seen[colour[v]], true))
            })
            .count();
        let x = crossing as f64 / edges.len() as f64;
        sum += x;
        sum_sq += x * x;
    }
    let k = samples as f64;
    let mean = sum / k;
    let var = (sum_sq - k * mean * mean) / (k - 1.0);
    Ok(CutFractionEstimate {
        mean,
        std_error: (var.max(0.0) / k).sqrt(),
        expected: *expected.numer() as f64 / *expected.denom() as f64,
        samples,
    })
}

fn random_edges<R: Rng>(r: usize, n: usize, m: usize, rng: &mut R) -> Vec<Vec<Vertex>> {
    let mut edges: Vec<Vec<Vertex>> = Vec::with_capacity(m);
    let mut attempts = 0;
    while edges.len() < m && attempts < 100 * m {
        attempts += 1;
        let mut e = rand::seq::index::sample(rng, n, r).into_vec();
        e.sort_unstable();
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    edges
}
