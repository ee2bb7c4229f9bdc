use ckl_core::catalog::{honeycomb, lattice, LATTICES};
use ckl_core::periodic_graph::{load_graph, quotient, trace_faces, validate_bipartite, Color};
use ckl_core::spanning_tree::temperley_lift;
use ckl_core::Error;
use proptest::prelude::*;

const HONEYCOMB: &str = r#"{
  "name": "honeycomb",
  "vertices": [
    {"id": "w", "pos": [0.3333333333333333, 0.3333333333333333]},
    {"id": "b", "pos": [0.6666666666666666, 0.6666666666666666]}
  ],
  "edges": [
    {"u": "w", "v": "b", "shift": [0, 0], "weight": 1},
    {"u": "w", "v": "b", "shift": [-1, 0], "weight": 1},
    {"u": "w", "v": "b", "shift": [0, -1], "weight": 1}
  ]
}"#;

#[test]
fn honeycomb_file_loads() {
    let g = load_graph(HONEYCOMB).unwrap();
    assert_eq!(g.vertex_count(), 2);
    assert_eq!(g.edge_count(), 3);
    let colors = validate_bipartite(&g).unwrap();
    assert_ne!(colors[0], colors[1]);
}

#[test]
fn invalid_files_are_rejected() {
    let unknown = HONEYCOMB.replacen("\"v\": \"b\"", "\"v\": \"x9\"", 1);
    assert!(matches!(load_graph(&unknown), Err(Error::UnknownEndpoint(id)) if id == "x9"));
    let zero = HONEYCOMB.replacen("\"weight\": 1", "\"weight\": 0", 1);
    assert!(matches!(load_graph(&zero), Err(Error::NonpositiveWeight { .. })));
}

#[test]
fn quotient_counts_from_the_examples() {
    let sq = quotient(&lattice("square").unwrap(), 2);
    assert_eq!((sq.vertex_count(), sq.edge_count()), (4, 8));
    let hc = quotient(&honeycomb(), 1).multigraph();
    assert_eq!((hc.n_vertices, hc.edges.len()), (2, 3));
    let tri = quotient(&lattice("triangular").unwrap(), 3);
    assert_eq!((tri.vertex_count(), tri.edge_count()), (9, 27));
}

#[test]
fn faces_from_the_examples() {
    assert_eq!(trace_faces(&lattice("square").unwrap()).unwrap().degrees(), vec![4]);
    assert_eq!(trace_faces(&honeycomb()).unwrap().degrees(), vec![6]);
    let lift = temperley_lift(&lattice("square").unwrap()).unwrap();
    assert_eq!(trace_faces(&lift).unwrap().degrees(), vec![4; 4]);
}

#[test]
fn triangular_lattice_is_not_bipartite() {
    assert!(matches!(validate_bipartite(&lattice("triangular").unwrap()), Err(Error::OddCycle(c)) if c.len() % 2 == 1));
}

#[test]
fn lifts_are_bipartite() {
    for name in LATTICES {
        let lift = temperley_lift(&lattice(name).unwrap()).unwrap();
        let colors = validate_bipartite(&lift).unwrap();
        let whites = colors.iter().filter(|&&c| c == Color::White).count();
        assert_eq!(2 * whites, lift.vertex_count(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotients_scale_and_satisfy_euler(idx in 0..LATTICES.len(), n in 1usize..5) {
        let g = lattice(LATTICES[idx]).unwrap();
        let t = quotient(&g, n);
        prop_assert_eq!(t.vertex_count(), n * n * g.vertex_count());
        prop_assert_eq!(t.edge_count(), n * n * g.edge_count());
        let f = trace_faces(&t.supercell).unwrap().len();
        prop_assert_eq!(t.vertex_count() as i64 - t.edge_count() as i64 + f as i64, 0);
    }

    #[test]
    fn double_quotient_bipartite_iff_faces_even(idx in 0..LATTICES.len()) {
        // the one-vertex square lattice has even faces but is only 2-colorable after doubling
        let g = lattice(LATTICES[idx]).unwrap();
        let even = trace_faces(&g).unwrap().iter().all(|f| f.degree() % 2 == 0);
        prop_assert_eq!(validate_bipartite(&quotient(&g, 2).supercell).is_ok(), even);
    }
}
