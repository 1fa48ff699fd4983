use thiserror::Error;

use crate::map::{Dart, Vertex};

/// Errors raised by the embedding, coloring and solver layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("loop edge {0} is not allowed")]
    LoopEdge(usize),
    #[error("cuff walk {index} is not a face-tracing orbit")]
    CuffMismatch { index: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("embedding is not orientable")]
    NotOrientable,
    #[error("edge {0} is not part of the graph")]
    NotSubgraph(usize),
    #[error("walk is not a cycle: {0}")]
    NotACycle(String),
    #[error("subgraph is not connected")]
    NotConnected,
    #[error("embedding is not cellular: {0}")]
    NotCellEmbedded(String),
    #[error("not a quadrangulation: {0}")]
    NotQuadrangulation(String),
    #[error("not a disk quadrangulation: {0}")]
    NotDiskQuadrangulation(String),
    #[error("not a cylinder quadrangulation: {0}")]
    NotCylinder(String),
    #[error("improper edge {u}-{v}")]
    ImproperEdge { u: Vertex, v: Vertex },
    #[error("vertex {0} is uncolored")]
    Uncolored(Vertex),
    #[error("improper boundary precoloring: {0}")]
    ImproperBoundary(String),
    #[error("boundary winding number is {0}, expected 0")]
    NonzeroWinding(i64),
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("vertex set does not separate the boundary cycles")]
    NotSeparating,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("edge set is not a cut: {0}")]
    NotACut(String),
    #[error("inconsistent flow at dart {0:?}")]
    InconsistentFlow(Dart),
    #[error("bad generator parameters: {0}")]
    BadParameters(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl Error {
    /// Short category label used by the command-line diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::MalformedRotation(_) | Error::LoopEdge(_) | Error::CuffMismatch { .. } => {
                "embedding"
            }
            Error::Disconnected | Error::NotOrientable | Error::NotCellEmbedded(_) => "topology",
            Error::NotSubgraph(_) | Error::NotACycle(_) | Error::NotConnected => "subgraph",
            Error::NotQuadrangulation(_)
            | Error::NotDiskQuadrangulation(_)
            | Error::NotCylinder(_) => "instance",
            Error::ImproperEdge { .. }
            | Error::Uncolored(_)
            | Error::ImproperBoundary(_)
            | Error::NonzeroWinding(_) => "coloring",
            Error::InfeasibleParameters(_) | Error::BadParameters(_) => "parameters",
            Error::NotSeparating | Error::PreconditionViolated(_) | Error::NotACut(_) => {
                "precondition"
            }
            Error::InconsistentFlow(_) | Error::Internal(_) => "internal",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
