//! Triangulate a grid with each heuristic from every start vertex.

use treeprep::heuristics::{sweep, HeuristicKind};
use treeprep::ordering::fill_in;
use treeprep::UGraph;

fn grid(rows: u32, cols: u32) -> UGraph {
    let id = |r: u32, c: u32| r * cols + c + 1;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    UGraph::from_edges(rows * cols, &edges)
}

fn main() {
    let g = grid(4, 5);
    println!("4x5 grid, treewidth 4");
    println!("{:<6} {:>4} {:>7} {:>4} {:>6}", "kind", "min", "mean", "max", "start");
    for kind in HeuristicKind::ALL {
        let s = sweep(&g, kind).unwrap();
        println!(
            "{:<6} {:>4} {:>7.3} {:>4} {:>6}",
            kind.name(),
            s.min_width,
            s.mean_width,
            s.max_width,
            s.best_start().to_string()
        );
        let f = kind.ordering(&g, s.best_start()).unwrap();
        let fill = fill_in(&g, &f).unwrap();
        println!("       best start adds {} fill edges", fill.fill_edges.len());
    }
}
