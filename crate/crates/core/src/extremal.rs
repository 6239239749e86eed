//! Lower-bound constructions for tight trees in r-partite r-graphs and the
//! exact bipartite path extremal number.
//!
//! Each class `V_i` is split into a core of `a = (t+1)/r − 1` vertices and a
//! periphery of `b` vertices. Edges take their vertex from the core in
//! exactly one class. No tight tree can mix core and periphery inside one
//! class, so every tight tree here has a class smaller than `(t+1)/r`.

use num_traits::{One, Pow};
use thiserror::Error;

use crate::format::RhgFile;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("formula only holds for odd t <= m + 1 and n >= m >= 1")]
    OutOfValidity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionParams {
    r: usize,
    t: usize,
    a: usize,
    b: usize,
}

impl ConstructionParams {
    /// Core size is derived from `(r, t)`; `b` is the periphery size.
    pub fn new(r: usize, t: usize, b: usize) -> Result<Self, ExtremalError> {
        if r < 2 {
            return Err(ExtremalError::InvalidParams(format!("r = {r} must be at least 2")));
        }
        if (t + 1) % r != 0 {
            return Err(ExtremalError::InvalidParams(format!("r = {r} does not divide t + 1 = {}", t + 1)));
        }
        if t + 1 < 2 * r {
            return Err(ExtremalError::InvalidParams(format!("t + 1 = {} < 2r leaves an empty core", t + 1)));
        }
        if b == 0 {
            return Err(ExtremalError::InvalidParams("periphery size b must be positive".into()));
        }
        Ok(ConstructionParams { r, t, a: (t + 1) / r - 1, b })
    }

    /// Checks that `a` matches the core size implied by `(r, t)`.
    pub fn with_core(r: usize, t: usize, a: usize, b: usize) -> Result<Self, ExtremalError> {
        let params = Self::new(r, t, b)?;
        if params.a != a {
            return Err(ExtremalError::InvalidParams(format!(
                "core size must be (t+1)/r - 1 = {}, got {a}",
                params.a
            )));
        }
        Ok(params)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn core_size(&self) -> usize {
        self.a
    }

    pub fn periphery_size(&self) -> usize {
        self.b
    }

    pub fn class_size(&self) -> usize {
        self.a + self.b
    }

    /// γ = a / b
    pub fn gamma(&self) -> Rational {
        Rational::new(self.a as i128, self.b as i128)
    }

    /// The realised ε = 1 − (1+γ)^{1−r}.
    pub fn epsilon(&self) -> Rational {
        Rational::one() - self.one_plus_gamma_pow()
    }

    /// (1+γ)^{1−r} = (b / (a+b))^{r−1}
    fn one_plus_gamma_pow(&self) -> Rational {
        Rational::new(self.b as i128, (self.a + self.b) as i128).pow((self.r - 1) as i32)
    }

    /// Smallest class size a tree must reach to be ruled out here, `(t+1)/r`.
    pub fn min_class(&self) -> usize {
        (self.t + 1) / self.r
    }

    fn vertex(&self, class: usize, k: usize) -> Vertex {
        class * self.class_size() + k
    }

    fn core(&self, class: usize) -> Vec<Vertex> {
        (0..self.a).map(|k| self.vertex(class, k)).collect()
    }

    fn periphery(&self, class: usize) -> Vec<Vertex> {
        (self.a..self.class_size()).map(|k| self.vertex(class, k)).collect()
    }
}

/// A generated host with its core membership.
#[derive(Debug, Clone)]
pub struct Construction {
    pub params: ConstructionParams,
    pub hypergraph: Hypergraph,
    /// `true` for core vertices.
    pub core: Vec<bool>,
    /// Set for the augmented variants, which carry no non-containment proof.
    pub experimental: bool,
}

impl Construction {
    /// 0 for core vertices, 1 for periphery; suitable as purity groups.
    pub fn groups(&self) -> Vec<usize> {
        self.core.iter().map(|&c| usize::from(!c)).collect()
    }

    pub fn to_rhg(&self) -> RhgFile {
        let p = &self.params;
        let mut comments = vec![
            format!("{} construction", if self.experimental { "augmented" } else { "lower-bound" }),
            format!("r={} t={} a={} b={}", p.r, p.t, p.a, p.b),
            format!("gamma={} epsilon={}", p.gamma(), p.epsilon()),
            format!("edges={}", self.hypergraph.edge_count()),
        ];
        if self.experimental {
            comments.push("experimental: non-containment unproven".into());
        }
        RhgFile::new(self.hypergraph.clone()).with_comments(comments)
    }
}

/// Every edge choosing from `choices[i]` in class `i`.
fn product(choices: &[Vec<Vertex>], out: &mut Vec<Vec<Vertex>>) {
    let mut current = Vec::with_capacity(choices.len());
    fn rec(choices: &[Vec<Vertex>], current: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        match choices.split_first() {
            None => out.push(current.clone()),
            Some((first, rest)) => {
                for &v in first {
                    current.push(v);
                    rec(rest, current, out);
                    current.pop();
                }
            }
        }
    }
    rec(choices, &mut current, out);
}

fn build(params: ConstructionParams, core_patterns: impl Iterator<Item = Vec<bool>>, experimental: bool) -> Construction {
    let r = params.r;
    let mut edges = Vec::new();
    for pattern in core_patterns {
        let choices: Vec<Vec<Vertex>> = (0..r)
            .map(|i| if pattern[i] { params.core(i) } else { params.periphery(i) })
            .collect();
        product(&choices, &mut edges);
    }
    let n = r * params.class_size();
    let partition = (0..n).map(|v| v / params.class_size()).collect();
    let core = (0..n).map(|v| v % params.class_size() < params.a).collect();
    let hypergraph = Hypergraph::new(r, n, edges, Some(partition)).expect("construction is r-partite");
    Construction { params, hypergraph, core, experimental }
}

/// The r-partite host whose edges meet the cores in exactly one class.
pub fn lower_bound_graph(params: ConstructionParams) -> Construction {
    let r = params.r;
    let patterns = (0..r).map(move |star| (0..r).map(|i| i == star).collect());
    build(params, patterns, false)
}

/// The base construction plus every r-partite edge meeting the cores in an
/// odd number (at least 3) of classes. Flagged experimental.
pub fn augmented_lower_bound_graph(params: ConstructionParams) -> Result<Construction, ExtremalError> {
    let r = params.r;
    if r < 3 {
        return Err(ExtremalError::InvalidParams("augmentation needs r >= 3".into()));
    }
    let patterns = (0u32..1 << r).filter_map(move |mask| {
        let ones = mask.count_ones();
        (ones == 1 || (ones >= 3 && ones % 2 == 1)).then(|| (0..r).map(|i| mask >> i & 1 == 1).collect())
    });
    Ok(build(params, patterns, true))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCount {
    /// r · a · b^{r−1}
    pub count: u128,
    /// count / Σ_i Π_{ℓ≠i} |V_ℓ|
    pub ratio: Rational,
    /// (1+γ)^{1−r} · ((t+1)/r − 1), which equals `ratio`.
    pub closed_form_ratio: Rational,
}

pub fn lower_bound_edge_count(params: ConstructionParams) -> EdgeCount {
    let (r, a, b) = (params.r as u128, params.a as u128, params.b as u128);
    let count = r * a * b.pow(params.r as u32 - 1);
    let denominator = r * (a + b).pow(params.r as u32 - 1);
    EdgeCount {
        count,
        ratio: Rational::new(count as i128, denominator as i128),
        closed_form_ratio: params.one_plus_gamma_pow() * Rational::from_integer(params.a as i128),
    }
}

/// Extremal number of `t`-edge paths in bipartite graphs with sides `n >= m`,
/// `(t−1)(n+m−t+1)/2`, valid for odd `t <= m + 1`.
pub fn grs_path_extremal(n: usize, m: usize, t: usize) -> Result<usize, ExtremalError> {
    if t % 2 == 0 || t > m + 1 || m < 1 || n < m {
        return Err(ExtremalError::OutOfValidity);
    }
    Ok((t - 1) * (n + m + 1 - t) / 2)
}
