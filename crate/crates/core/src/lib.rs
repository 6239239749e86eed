//! Tight-tree embedding in uniform hypergraphs.
//!
//! The crate covers codegree peeling of r-partite r-graphs, greedy embedding
//! of tight r-trees into the peeled host, the matching lower-bound
//! constructions, an exhaustive containment oracle, and a cut-based route to
//! tree containment in ordinary graphs.

pub mod embedder;
pub mod experiment;
pub mod extremal;
pub mod format;
pub mod hypergraph;
pub mod oracle;
pub mod peeling;
pub mod tight_tree;
pub mod turan;

/// Exact rationals used wherever a bound is compared or reported.
pub type Rational = num_rational::Ratio<i128>;

pub use embedder::{embed, greedy_embed_nonpartite, verify_embedding, EmbedError, EmbedOutcome, Embedding};
pub use extremal::{ConstructionParams, Construction};
pub use format::RhgFile;
pub use hypergraph::{EdgeId, Hypergraph, HypergraphError, ShadowIndex, Vertex};
pub use oracle::{contains_any_tight_tree, contains_tree, OracleVerdict, SearchBudget};
pub use peeling::{assign_labels, peel, PeelResult, PeelingPlan, Thresholds};
pub use tight_tree::{TightTree, TreePartition};
pub use turan::{Cut, PipelineConfig, PipelineReport};
