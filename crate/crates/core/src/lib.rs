//! Safe reduction rules, elimination orderings, exact treewidth and junction
//! trees for triangulating (moralised) graphs.
//!
//! ```
//! use treeprep::io::parse_input;
//! use treeprep::pipeline::{run_pipeline, PipelineConfig};
//!
//! let input = parse_input("p dag 3 2\n1 3\n2 3\n")?;
//! let r = run_pipeline(&input, &PipelineConfig::default())?;
//! assert_eq!((r.width, r.optimal), (2, true));
//! # Ok::<(), treeprep::Error>(())
//! ```

pub mod error;
pub mod exact;
pub mod graph;
pub mod heuristics;
pub mod io;
pub mod ordering;
pub mod pipeline;
pub mod reduction;

pub use error::{Error, Result};
pub use graph::{moralize, Dag, UGraph, VertexId};
pub use io::Input;
