//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::time::Instant;

use tightree_core::experiment::{self, Scale};
use tightree_core::extremal::{self, ConstructionParams};
use tightree_core::{contains_any_tight_tree, SearchBudget};

const SEED: u64 = 20240611;

struct Gate {
    failed: usize,
}

impl Gate {
    fn check(&mut self, id: u32, name: &str, run: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (ok, detail) = run();
        if !ok {
            self.failed += 1;
        }
        println!(
            "{} criterion {id} ({name}): {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
}

fn main() {
    let budget = SearchBudget::default();
    let mut gate = Gate { failed: 0 };

    gate.check(1, "peeling guarantee", || {
        let report = experiment::lemma_guarantee(SEED, Scale::Small);
        let rows = report.rows.len();
        (rows == 1500 && report.passed(), format!("{rows} instances, {} violations", report.violations))
    });

    gate.check(2, "partite embedding", || {
        let report = experiment::theorem_endtoend(SEED, Scale::Small, budget);
        let col = report.column("oracle").unwrap();
        let checked = report.rows.iter().filter(|row| row[col] != "skipped").count();
        let concur = report.rows.iter().filter(|row| row[col] == "found").count();
        (
            report.rows.len() == 300 && checked == 100 && concur == 100 && report.passed(),
            format!("{} pairs, {} violations, oracle concurs on {concur}/{checked}", report.rows.len(), report.violations),
        )
    });

    gate.check(3, "lower-bound certification", || {
        let mut notes = Vec::new();
        let mut ok = true;
        for (r, t, a, b) in [(2, 3, 1, 1), (2, 5, 2, 2), (3, 5, 1, 1), (3, 5, 1, 2)] {
            let params = ConstructionParams::with_core(r, t, a, b).unwrap();
            let h = extremal::lower_bound_graph(params).hypergraph;
            let expected = r * a * b.pow(r as u32 - 1);
            let verdict = contains_any_tight_tree(&h, t, (t + 1) / r, budget);
            ok &= h.edge_count() == expected && verdict.is_absent();
            notes.push(format!("({r},{t},{a},{b}) {}={expected} {}", h.edge_count(), verdict.name()));
        }
        (ok, notes.join("; "))
    });

    gate.check(4, "bipartite path extremal datum", || {
        let formula = extremal::grs_path_extremal(2, 2, 3).unwrap();
        let search = experiment::grs_exhaustive(2, 2, 3, budget);
        (
            formula == 2 && search.max_free_edges == Some(2) && search.matching_free && search.all_denser_contain,
            format!("formula {formula}, exhaustive {:?} over {} subgraphs", search.max_free_edges, search.subgraphs_checked),
        )
    });

    gate.check(5, "graph Turán pipeline", || {
        let report = experiment::turan_sweep(SEED, Scale::Small, budget);
        (
            report.passed(),
            format!(
                "{} pairs, {} violations, resolved without fallback: {}",
                report.rows.len(),
                report.violations,
                report.summary["no_fallback_fraction"]
            ),
        )
    });

    gate.check(6, "cut invariants and r-cut expectation", || {
        let report = experiment::cut_expectation(SEED, Scale::Small);
        (
            report.passed() && report.rows.len() == 203,
            format!(
                "{} violations; z = {} / {} / {} for r = 2, 3, 4",
                report.violations, report.summary["z_r2"], report.summary["z_r3"], report.summary["z_r4"]
            ),
        )
    });

    gate.check(7, "peeling confluence and ledger", || {
        let (instances, failures) = experiment::peeling_confluence(SEED, 200, 5);
        (failures == 0, format!("{instances} instances x 5 random orders, {failures} disagreements"))
    });

    if gate.failed > 0 {
        println!("{} criteria failed", gate.failed);
        std::process::exit(1);
    }
}
