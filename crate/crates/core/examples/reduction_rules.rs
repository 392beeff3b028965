//! Apply each preset rule set to a few graphs and show what survives.

use treeprep::reduction::{reduce_to_fixpoint, RuleSet};
use treeprep::UGraph;

fn main() {
    let graphs = [
        ("C4", UGraph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)])),
        (
            "3-cube",
            UGraph::from_edges(
                8,
                &[
                    (1, 2), (2, 3), (3, 4), (4, 1),
                    (5, 6), (6, 7), (7, 8), (8, 5),
                    (1, 5), (2, 6), (3, 7), (4, 8),
                ],
            ),
        ),
        (
            "octahedron",
            UGraph::from_edges(
                6,
                &[
                    (1, 2), (1, 3), (1, 4), (1, 5),
                    (6, 2), (6, 3), (6, 4), (6, 5),
                    (2, 3), (3, 4), (4, 5), (5, 2),
                ],
            ),
        ),
    ];
    for (name, g) in graphs {
        println!("{name}: {} vertices, {} edges", g.num_vertices(), g.num_edges());
        for (preset, rules) in RuleSet::PRESETS {
            let state = reduce_to_fixpoint(g.clone(), rules, 1);
            println!(
                "  {preset:<4} residual ({}, {}) low {}",
                state.graph().num_vertices(),
                state.graph().num_edges(),
                state.low()
            );
        }
        let state = reduce_to_fixpoint(g, RuleSet::ALL, 1);
        for rec in state.stack() {
            println!(
                "    {:<18} v{} deg {} nbrs {:?}",
                rec.rule.name(),
                rec.vertex,
                rec.degree_at_removal,
                rec.neighbors_at_removal.iter().map(|v| v.0).collect::<Vec<_>>()
            );
        }
    }
}
