//! Moralise a small Bayesian-network structure and print it as `.gr`.
//!
//! Run with `cargo run --example moralize_dag [file.dag]`.

use treeprep::io;
use treeprep::Dag;

// Asia network: 1 asia, 2 smoke, 3 tub, 4 lung, 5 bronc, 6 either, 7 xray, 8 dysp
const ASIA: &str = "\
c asia
p dag 8 8
1 3
2 4
2 5
3 6
4 6
6 7
6 8
5 8
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => ASIA.to_string(),
    };
    let dag: Dag = io::parse_dag(&text)?;
    let moral = dag.moralize();
    eprintln!(
        "{} vertices, {} arcs -> {} moral edges ({} added by marrying parents)",
        dag.num_vertices(),
        dag.num_arcs(),
        moral.num_edges(),
        moral.num_edges() - dag.skeleton().num_edges()
    );
    print!("{}", io::write_gr(&moral));
    Ok(())
}
