//! Exact treewidth through both routes: subset DP for small graphs, and
//! branch and bound after reduction for larger ones.

use std::time::Instant;

use treeprep::exact::{branch_and_bound_treewidth, exact_treewidth, subset_dp_treewidth};
use treeprep::UGraph;

fn petersen() -> UGraph {
    UGraph::from_edges(
        10,
        &[
            (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
            (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
            (6, 8), (8, 10), (10, 7), (7, 9), (9, 6),
        ],
    )
}

fn main() {
    let g = petersen();
    let t = Instant::now();
    let dp = subset_dp_treewidth(&g, None).unwrap();
    println!("petersen, subset DP:       {} in {:?}", dp.treewidth, t.elapsed());
    println!("  witness {:?}", dp.ordering.iter().map(|v| v.0).collect::<Vec<_>>());
    let t = Instant::now();
    let bb = branch_and_bound_treewidth(&g, None).unwrap();
    println!("petersen, branch & bound:  {} in {:?}", bb.treewidth, t.elapsed());

    // a small budget fails loudly, with the bounds known so far
    match subset_dp_treewidth(&g, Some(100)) {
        Err(e) => println!("budget 100: {e}"),
        Ok(r) => println!("budget 100: {}", r.treewidth),
    }

    // 3x10 grid: 30 vertices, past the subset-DP limit
    let mut edges = Vec::new();
    for r in 0..3u32 {
        for c in 0..10u32 {
            let v = r * 10 + c + 1;
            if c < 9 {
                edges.push((v, v + 1));
            }
            if r < 2 {
                edges.push((v, v + 10));
            }
        }
    }
    let grid = UGraph::from_edges(30, &edges);
    let t = Instant::now();
    let r = exact_treewidth(&grid, None).unwrap();
    println!("3x10 grid:                 {} in {:?}", r.treewidth, t.elapsed());
}
