use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("vertex {0} is listed twice")]
    DuplicateVertex(VertexId),

    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),

    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(VertexId, VertexId),

    #[error("digraph contains a directed cycle through back arc {from} -> {to}")]
    Cycle { from: VertexId, to: VertexId },

    #[error("ordering does not cover exactly the graph's vertices")]
    OrderingMismatch,

    #[error("ordering is not a perfect elimination scheme (vertex {0} has non-adjacent higher neighbours)")]
    NotPerfectElimination(VertexId),

    #[error("exact search budget exhausted (lower bound {lower}, upper bound {upper})")]
    BudgetExceeded { lower: usize, upper: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
