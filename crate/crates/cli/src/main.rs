use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tightree_core::embedder::EmbedError;
use tightree_core::experiment::{self, Scale, Suite};
use tightree_core::extremal::{self, ConstructionParams};
use tightree_core::format;
use tightree_core::oracle::TreeSearch;
use tightree_core::peeling::{self, WorklistOrder};
use tightree_core::tight_tree;
use tightree_core::turan::{self, PipelineConfig, PipelineVerdict, TuranError};
use tightree_core::{
    assign_labels, contains_tree, embed, greedy_embed_nonpartite, EmbedOutcome, Hypergraph, RhgFile,
    SearchBudget, Thresholds, TightTree,
};

#[derive(Parser)]
#[command(name = "tightree", version, about = "Tight-tree embedding and extremal experiments for uniform hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random tight tree (.ttree JSON) from a seeded construction sequence.
    GenTree {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tight path with t edges.
    GenPath {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Core/periphery construction avoiding tight trees with large classes (.rhg).
    GenExtremal {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        t: usize,
        /// Periphery size per class.
        #[arg(long)]
        b: usize,
        /// Core size per class; defaults to (t+1)/r − 1.
        #[arg(long)]
        a: Option<usize>,
        /// Add the odd-core edges (experimental, r >= 3).
        #[arg(long)]
        augmented: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shadow sets and codegrees of a hypergraph.
    Shadow {
        #[arg(long)]
        host: PathBuf,
    },
    /// Codegree peeling; prints the deletion trace as JSON lines.
    Peel {
        #[arg(long)]
        host: PathBuf,
        /// Comma-separated class thresholds t_1,...,t_r.
        #[arg(long, value_delimiter = ',', required = true)]
        thresholds: Vec<usize>,
        /// Use a seeded random worklist instead of the canonical one.
        #[arg(long)]
        random_order: Option<u64>,
        /// Write the surviving subgraph here (.rhg).
        #[arg(long)]
        survivors: Option<PathBuf>,
    },
    /// Greedy embedding of a tree into a dense host.
    Embed {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive containment search.
    Oracle {
        #[arg(long)]
        host: PathBuf,
        /// Search for this tree; without it, search for any tight tree with --t edges.
        #[arg(long, required_unless_present = "t")]
        tree: Option<PathBuf>,
        #[arg(long, conflicts_with = "tree")]
        t: Option<usize>,
        /// Minimum class size of the trees searched for with --t.
        #[arg(long, default_value_t = 1, requires = "t")]
        min_class: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed a tree into a graph through a large 2-cut.
    Turan {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment suite; writes <suite>.csv and <suite>.json into --out.
    Experiment {
        /// lemma-guarantee, theorem-endtoend, lowerbound-certify, turan-sweep or cut-expectation.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "small")]
        scale: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    #[arg(long, default_value_t = 50_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: u64,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    budget_secs: u64,
}

impl From<BudgetArgs> for SearchBudget {
    fn from(b: BudgetArgs) -> Self {
        SearchBudget::new(b.budget_nodes, Duration::from_secs(b.budget_secs))
    }
}

/// Failure classes, mapped onto exit codes.
enum Failure {
    /// Bad arguments or unreadable input.
    Usage(String),
    /// A guaranteed property failed to hold.
    Invariant(String),
}

/// Successful runs report whether the question was answered positively.
enum Outcome {
    Positive,
    Negative,
}

type CliResult = Result<Outcome, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::GenTree { r, t, seed, out } => {
            check_tree_params(r, t)?;
            emit(out.as_deref(), &(tight_tree::random_tight_tree(r, t, seed).to_json() + "\n"))
        }
        Command::GenPath { r, t, out } => {
            check_tree_params(r, t)?;
            emit(out.as_deref(), &(tight_tree::tight_path(r, t).to_json() + "\n"))
        }
        Command::GenExtremal { r, t, b, a, augmented, out } => {
            let params = match a {
                Some(a) => ConstructionParams::with_core(r, t, a, b),
                None => ConstructionParams::new(r, t, b),
            }
            .map_err(usage)?;
            let construction = if augmented {
                extremal::augmented_lower_bound_graph(params).map_err(usage)?
            } else {
                extremal::lower_bound_graph(params)
            };
            emit(out.as_deref(), &format::write(&construction.to_rhg()))
        }
        Command::Shadow { host } => shadow(&read_host(&host)?),
        Command::Peel { host, thresholds, random_order, survivors } => {
            peel(&read_host(&host)?, thresholds, random_order, survivors.as_deref())
        }
        Command::Embed { host, tree, out } => embed_cmd(&read_host(&host)?, &read_tree(&tree)?, out.as_deref()),
        Command::Oracle { host, tree, t, min_class, budget, out } => {
            let host = read_host(&host)?;
            let budget = budget.into();
            match (tree, t) {
                (Some(tree), _) => {
                    let tree = read_tree(&tree)?;
                    let verdict = contains_tree(&host, &tree, budget);
                    report_verdict(verdict.name(), verdict.clone().found().map(|e| e.to_json()), out.as_deref())
                }
                (None, Some(t)) => {
                    if t == 0 || min_class == 0 {
                        return Err(usage("--t and --min-class must be at least 1"));
                    }
                    let verdict = TreeSearch::new(&host, t, min_class).budget(budget).run();
                    report_verdict(verdict.name(), verdict.clone().found().map(|w| w.to_json()), out.as_deref())
                }
                (None, None) => Err(usage("either --tree or --t is required")),
            }
        }
        Command::Turan { graph, tree, seed, restarts, budget, out } => {
            let g = read_host(&graph)?;
            let tree = read_tree(&tree)?;
            let config = PipelineConfig { seed, restarts, budget: budget.into() };
            let report = turan::embed_tree_via_cut(&g, &tree, config).map_err(|e| match e {
                TuranError::NotAGraph(_) | TuranError::InvalidParameter(_) => usage(e),
                TuranError::GuaranteeViolated(_) | TuranError::UnverifiedEmbedding => Failure::Invariant(e.to_string()),
            })?;
            let json = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
            emit(out.as_deref(), &json)?;
            Ok(if report.verdict == PipelineVerdict::Found { Outcome::Positive } else { Outcome::Negative })
        }
        Command::Experiment { suite, seed, scale, budget, out } => {
            let suite: Suite = suite.parse().map_err(usage)?;
            let scale: Scale = scale.parse().map_err(usage)?;
            run_experiment(suite, seed, scale, budget.into(), &out)
        }
    }
}

fn check_tree_params(r: usize, t: usize) -> Result<(), Failure> {
    if r < 2 || t < 1 {
        return Err(usage("need r >= 2 and t >= 1"));
    }
    Ok(())
}

fn read_host(path: &Path) -> Result<Hypergraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(format::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?.hypergraph)
}

fn read_tree(path: &Path) -> Result<TightTree, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    TightTree::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to stdout when no path is given.
fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => stdout(text),
    }
    Ok(Outcome::Positive)
}

/// Prints to stdout; a closed pipe (e.g. `| head`) is not an error.
fn stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

#[derive(Serialize)]
struct ShadowEntry<'a> {
    #[serde(rename = "S")]
    set: &'a [usize],
    codegree: usize,
}

fn shadow(h: &Hypergraph) -> CliResult {
    let index = h.shadow();
    let mut entries: Vec<ShadowEntry> = index.ids().map(|id| ShadowEntry { set: index.set(id), codegree: index.codegree(id) }).collect();
    entries.sort_by(|a, b| a.set.cmp(b.set));
    let summary = serde_json::json!({
        "r": h.r(),
        "vertices": h.vertex_count(),
        "edges": h.edge_count(),
        "shadow_size": h.shadow_size(),
        "avoiding_counts": h.avoiding_shadow_counts().ok(),
        "shadow": entries,
    });
    stdout(&(serde_json::to_string_pretty(&summary).expect("json") + "\n"));
    Ok(Outcome::Positive)
}

fn peel(h: &Hypergraph, thresholds: Vec<usize>, random_order: Option<u64>, survivors: Option<&Path>) -> CliResult {
    let thresholds = Thresholds::new(thresholds).map_err(usage)?;
    let plan = assign_labels(h, &thresholds).map_err(usage)?;
    let order = random_order.map_or(WorklistOrder::Canonical, WorklistOrder::Random);
    let result = peeling::peel_with_order(h, &plan, order).map_err(usage)?;
    stdout(&result.trace_json_lines());
    eprintln!("surviving {} of {} edges after {} deletions", result.surviving.len(), h.edge_count(), result.trace.len());
    if let Some(path) = survivors {
        emit(Some(path), &format::write(&RhgFile::new(result.subgraph(h))))?;
    }
    if !peeling::trace_ledger_holds(h, &plan, &result) {
        return Err(Failure::Invariant("deletion ledger does not balance".into()));
    }
    if result.emptied {
        if peeling::exceeds_density_bound(h, thresholds.t()) {
            return Err(Failure::Invariant(format!(
                "host exceeds the density bound for t = {} but peeled to nothing",
                thresholds.t()
            )));
        }
        return Ok(Outcome::Negative);
    }
    Ok(Outcome::Positive)
}

fn embed_cmd(h: &Hypergraph, tree: &TightTree, out: Option<&Path>) -> CliResult {
    let outcome = if h.partition().is_some() { embed(h, tree) } else { greedy_embed_nonpartite(h, tree) };
    match outcome {
        Ok(EmbedOutcome::Found(embedding)) => emit(out, &(embedding.to_json() + "\n")),
        Ok(EmbedOutcome::Inconclusive(reason)) => {
            eprintln!("inconclusive: {reason:?}");
            Ok(Outcome::Negative)
        }
        Err(e @ (EmbedError::LemmaViolated { .. } | EmbedError::GreedyStuck { .. })) => Err(Failure::Invariant(e.to_string())),
        Err(e) => Err(usage(e)),
    }
}

fn report_verdict(name: &str, certificate: Option<String>, out: Option<&Path>) -> CliResult {
    eprintln!("{name}");
    match certificate {
        Some(json) => emit(out, &(json + "\n")),
        None => Ok(Outcome::Negative),
    }
}

fn run_experiment(suite: Suite, seed: u64, scale: Scale, budget: SearchBudget, out: &Path) -> CliResult {
    fs::create_dir_all(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    let report = experiment::run_suite(suite, seed, scale, budget);
    let stem = out.join(suite.name());
    emit(Some(&stem.with_extension("csv")), &report.to_csv())?;
    emit(Some(&stem.with_extension("json")), &report.to_json())?;
    let mut text = format!("{suite}: {} rows, {} violations\n", report.rows.len(), report.violations);
    for (key, value) in &report.summary {
        text.push_str(&format!("  {key} = {value}\n"));
    }
    stdout(&text);
    if report.passed() {
        Ok(Outcome::Positive)
    } else {
        Err(Failure::Invariant(format!("{} rows of {suite} broke a guaranteed property", report.violations)))
    }
}
