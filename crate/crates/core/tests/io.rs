use lowdiam::graph::io::{read_dimacs, read_edge_list, write_edge_list};
use lowdiam::Graph;
use proptest::prelude::*;

proptest! {
    #[test]
    fn edge_list_round_trips(
        n in 1usize..30,
        // lengths stay under the default cap n³ for every n >= 2
        raw in prop::collection::vec((0usize..30, 0usize..30, 0.25f64..8.0), 0..60),
    ) {
        let triples: Vec<_> = raw.into_iter().filter(|&(u, v, _)| u < n && v < n && u != v).collect();
        let g = Graph::from_triples(n, &triples).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back: Graph = read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back.node_count(), n);
        prop_assert_eq!(back.edges(), g.edges());
    }
}

#[test]
fn edge_list_skips_comments_and_reports_bad_lines() {
    let g: Graph = read_edge_list("# a comment\n0 1 2.5\n\n1 2 1\n".as_bytes()).unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.edge_count(), 2);
    let err = read_edge_list::<f64>("0 1 2.5\n1 x 1\n".as_bytes()).unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
    assert!(read_edge_list::<f64>("0 1 -3\n".as_bytes()).is_err());
}

#[test]
fn dimacs_symmetrizes_arcs() {
    let text = "c sample\np sp 3 4\na 1 2 5\na 2 1 3\na 2 3 1\na 3 2 1\n";
    let g: Graph = read_dimacs(text.as_bytes()).unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.edge_count(), 2);
    assert_eq!(g.length_between(0, 1), Some(3.0));
    assert_eq!(g.length_between(1, 2), Some(1.0));
}
