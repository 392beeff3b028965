//! The whole method on a `.gr` or `.dag` file: reduce, triangulate the
//! residual, undo the reduction, and report.
//!
//! Run with `cargo run --release --example pipeline [file]`.

use treeprep::io::{self, Input};
use treeprep::pipeline::{reduction_report, run_pipeline, PipelineConfig};
use treeprep::reduction::RuleSet;
use treeprep::Dag;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input: Input = match std::env::args().nth(1) {
        Some(path) => io::parse_input(&std::fs::read_to_string(path)?)?,
        // two diamonds sharing a child, plus a tail
        None => Dag::from_arcs(
            9,
            &[(1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (6, 5), (5, 7), (6, 8), (7, 9), (8, 9)],
        )
        .into(),
    };
    print!("{}", reduction_report(&input, &RuleSet::PRESETS));

    let r = run_pipeline(&input, &PipelineConfig::default())?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    println!();
    println!("width {} (low {}), optimal: {}", r.width, r.low, r.optimal);
    println!("residual {:?} solved by {}", r.residual_size, r.solver);
    println!("ordering {:?}", r.ordering.iter().map(|v| v.0).collect::<Vec<_>>());
    println!("{} fill edges, {} junction tree nodes", r.fill.fill_edges.len(), r.junction_tree.nodes.len());
    println!("{}", r.stats_json());
    Ok(())
}
