use ckl_core::catalog::{lattice, LATTICES};
use ckl_core::periodic_graph::{quotient, validate_bipartite, Color, FiniteGraph, PeriodicGraph};
use ckl_core::spanning_tree::{
    count_spanning_trees, dimer_tree_identity_check, matrix_tree_log_count, spectral_tree_count, temperley_lift,
    tree_entropy_fd, tree_entropy_matrix_tree, DEFAULT_SCHEDULE,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn entropy(name: &str) -> f64 {
    tree_entropy_fd(&lattice(name).unwrap(), &DEFAULT_SCHEDULE).unwrap().per_fd
}

fn complete(n: usize) -> FiniteGraph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
    FiniteGraph::new(n, edges)
}

#[test]
fn small_complete_graphs() {
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    assert_eq!(count_spanning_trees(&complete(3)).unwrap().value, int(3));
    assert_eq!(count_spanning_trees(&complete(4)).unwrap().value, int(16));
}

#[test]
fn square_quotient_counts_agree_exactly() {
    let sq = lattice("square").unwrap();
    let exact = count_spanning_trees(&quotient(&sq, 2).multigraph()).unwrap();
    assert_eq!(exact.value, BigRational::from_integer(BigInt::from(32)));
    assert!((spectral_tree_count(&sq, 2).unwrap() - 32f64.ln()).abs() < 1e-12);
    assert!(spectral_tree_count(&sq, 1).unwrap().abs() < 1e-12);
}

#[test]
fn spectral_and_exact_on_the_named_examples() {
    for (name, n) in [("triangular", 4), ("kagome", 3)] {
        let t = lattice(name).unwrap();
        let exact = count_spanning_trees(&quotient(&t, n).multigraph()).unwrap().ln();
        assert!((spectral_tree_count(&t, n).unwrap() - exact).abs() < 1e-9 * exact, "{name}");
        assert!((matrix_tree_log_count(&t, n).unwrap() - exact).abs() < 1e-9 * exact, "{name}");
    }
}

#[test]
fn entropies_of_the_quoted_lattices() {
    assert!((entropy("triangular") - 1.615329).abs() < 1e-5);
    assert!((entropy("kite") - 6.730256).abs() < 1e-5);
    let t = tree_entropy_fd(&lattice("4.8.8").unwrap(), &DEFAULT_SCHEDULE).unwrap();
    assert!((t.per_vertex - 0.786684275378832).abs() < 1e-9);
    assert_eq!(t.per_fd, t.n_v as f64 * t.per_vertex);
}

#[test]
fn transfer_relations_between_lattices() {
    let tri = entropy("triangular");
    assert!((entropy("kagome") - tri - 6f64.ln()).abs() < 1e-5);
    assert!((entropy("3.12.12") - tri - 15f64.ln()).abs() < 1e-5);
    assert!((entropy("nine") - tri - 2.0 * 2f64.ln()).abs() < 1e-5);
    assert!((entropy("kite") - entropy("4.8.8") - 2.0 * 6f64.ln()).abs() < 1e-5);
}

#[test]
fn direct_determinants_reach_the_same_limit() {
    let t = lattice("triangular").unwrap();
    let direct = tree_entropy_matrix_tree(&t, &[8, 12, 16, 24, 32]).unwrap();
    assert!((direct.per_fd - entropy("triangular")).abs() < 1e-5, "{direct:?}");
}

#[test]
fn lift_shapes() {
    for (name, v, e) in [("square", 4, 8), ("triangular", 6, 12)] {
        let lift = temperley_lift(&lattice(name).unwrap()).unwrap();
        assert_eq!((lift.vertex_count(), lift.edge_count()), (v, e), "{name}");
    }
    for name in LATTICES {
        let lift = temperley_lift(&lattice(name).unwrap()).unwrap();
        let colors = validate_bipartite(&lift).unwrap();
        for (v, c) in colors.iter().enumerate() {
            if *c == Color::White {
                assert_eq!(lift.degree(v), 4, "{name}");
            }
        }
    }
}

#[test]
fn dimer_and_tree_pipelines_agree() {
    let vals = [("square", 1.16624), ("triangular", 1.615329), ("kagome", 3.407088)];
    for (name, want) in vals {
        let r = dimer_tree_identity_check(&lattice(name).unwrap()).unwrap();
        assert!(r.difference.abs() < 2e-5, "{name}: {r:?}");
        assert!((r.mahler.value - want).abs() < 1e-5, "{name}");
    }
}

fn weighted(t: &PeriodicGraph, seed: &[f64]) -> PeriodicGraph {
    // dyadic weights keep the exact count exact
    let w: Vec<f64> = (0..t.edge_count()).map(|k| (seed[k % seed.len()] * 8.0).round() / 8.0).collect();
    t.with_weights(&w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectral_count_is_exact(idx in 0..LATTICES.len(), seed in prop::collection::vec(0.5f64..3.0, 1..8), n in 1usize..5) {
        let t = weighted(&lattice(LATTICES[idx]).unwrap(), &seed);
        let exact = count_spanning_trees(&quotient(&t, n).multigraph()).unwrap().ln();
        let spectral = spectral_tree_count(&t, n).unwrap();
        prop_assert!((spectral - exact).abs() <= 1e-9 * exact.abs().max(1.0), "{} vs {}", spectral, exact);
    }
}
