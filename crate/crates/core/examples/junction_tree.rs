//! From an elimination ordering to fill-in, maximal cliques and a junction
//! tree, written in the `.jt` text format.

use treeprep::io::write_junction_tree;
use treeprep::ordering::{
    build_junction_tree, chordality_check, fill_in, is_perfect_elimination,
    maximal_cliques_chordal, LinearOrdering,
};
use treeprep::{UGraph, VertexId};

fn main() {
    // 6-cycle with one chord
    let g = UGraph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4)]);
    assert!(chordality_check(&g).is_none());

    let f = LinearOrdering::from_sequence([2, 6, 3, 5, 1, 4].map(VertexId)).unwrap();
    let fill = fill_in(&g, &f).unwrap();
    let fe: Vec<_> = fill.fill_edges.iter().map(|(a, b)| (a.0, b.0)).collect();
    println!("fill edges {fe:?}, width {}", fill.width);
    assert!(is_perfect_elimination(&fill.chordal_graph, &f).unwrap());

    let cliques = maximal_cliques_chordal(&fill.chordal_graph, &f).unwrap();
    let jt = build_junction_tree(&cliques);
    assert!(jt.has_running_intersection());
    print!("{}", write_junction_tree(&jt));
}
