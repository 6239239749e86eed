use tightree_core::experiment::grs_exhaustive;
use tightree_core::extremal::{self, ConstructionParams};
use tightree_core::turan::{self, Cut};
use tightree_core::{Hypergraph, Rational, SearchBudget};

#[test]
fn generator_counts_match_the_product_formula() {
    for r in 2..=4usize {
        for t in (2 * r - 1..=4 * r - 1).filter(|t| (t + 1) % r == 0) {
            for b in 1..=3usize {
                let params = ConstructionParams::new(r, t, b).unwrap();
                let c = extremal::lower_bound_graph(params);
                let a = (t + 1) / r - 1;
                assert_eq!(c.hypergraph.edge_count(), r * a * b.pow(r as u32 - 1), "r={r} t={t} b={b}");
                let count = extremal::lower_bound_edge_count(params);
                assert_eq!(count.count as usize, c.hypergraph.edge_count());
                assert_eq!(count.ratio, count.closed_form_ratio);
                // every edge meets the cores exactly once
                for e in c.hypergraph.edges() {
                    assert_eq!(e.iter().filter(|&&v| c.core[v]).count(), 1);
                }
                let full_shadow = r * (a + b).pow(r as u32 - 1);
                assert_eq!(count.ratio, Rational::new(count.count as i128, full_shadow as i128));
            }
        }
    }
}

#[test]
fn augmented_construction_adds_all_core_edges_for_three_classes() {
    let params = ConstructionParams::new(3, 8, 2).unwrap();
    let (a, b) = (2, 2);
    let c = extremal::augmented_lower_bound_graph(params).unwrap();
    assert!(c.experimental);
    assert_eq!(c.hypergraph.edge_count(), 3 * a * b * b + a * a * a);
    assert!(extremal::augmented_lower_bound_graph(ConstructionParams::new(2, 5, 2).unwrap()).is_err());
}

#[test]
fn epsilon_and_gamma() {
    let p = ConstructionParams::with_core(3, 5, 1, 2).unwrap();
    assert_eq!(p.gamma(), Rational::new(1, 2));
    assert_eq!(p.epsilon(), Rational::new(5, 9));
    assert_eq!(p.min_class(), 2);
}

#[test]
fn grs_formula_matches_exhaustive_search() {
    for (n, m, t) in [(2, 2, 3), (3, 3, 3), (4, 3, 3)] {
        let formula = extremal::grs_path_extremal(n, m, t).unwrap();
        let search = grs_exhaustive(n, m, t, SearchBudget::default());
        assert_eq!(search.max_free_edges, Some(formula), "n={n} m={m} t={t}");
        assert!(search.all_denser_contain);
    }
    assert_eq!(extremal::grs_path_extremal(2, 2, 3).unwrap(), 2);
    assert!(extremal::grs_path_extremal(2, 2, 4).is_err());
}

#[test]
fn turan_thresholds() {
    assert_eq!(turan::turan_threshold(5, 3), Rational::new(15, 2));
    assert_eq!(turan::turan_threshold(10, 2), Rational::from_integer(5));
    assert_eq!(turan::turan_threshold(8, 4), Rational::from_integer(18));
    assert_eq!(turan::decimal(turan::turan_threshold(5, 3)), "7.5");
    assert_eq!(turan::aks_cut_lower_bound(12, 3).unwrap(), Rational::from_integer(8));
    assert!(turan::aks_cut_lower_bound(12, 1).is_err());
}

#[test]
fn exact_r_cut_fraction() {
    assert_eq!(turan::expected_r_cut_fraction(2).unwrap(), Rational::new(1, 2));
    assert_eq!(turan::expected_r_cut_fraction(3).unwrap(), Rational::new(2, 9));
    assert_eq!(turan::expected_r_cut_fraction(4).unwrap(), Rational::new(3, 32));
    for r in 2..=24u32 {
        let exact = turan::expected_r_cut_fraction(r as usize).unwrap();
        let float: f64 = (1..=r).map(|k| k as f64 / r as f64).product();
        let approx = *exact.numer() as f64 / *exact.denom() as f64;
        assert!((approx - float).abs() <= 1e-12 * float.max(1e-300), "r={r}");
    }
    assert!(turan::expected_r_cut_fraction(25).is_err());
}

#[test]
fn complete_graph_cut() {
    let edges = (0..5).flat_map(|a| (a + 1..5).map(move |b| vec![a, b])).collect();
    let k5 = Hypergraph::new(2, 5, edges, None).unwrap();
    let cut = turan::local_search_two_cut(&k5, 0, 8).unwrap();
    assert_eq!(cut.size, 6);
    assert_eq!(Cut::from_sides(&k5, vec![0, 0, 1, 1, 1]).size, 6);
}
