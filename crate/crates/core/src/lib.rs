//! Precoloring extension for quadrangulations of surfaces.
//!
//! Given a quadrangulation of a surface with boundary and a 3-coloring of
//! its boundary cycles, decide whether the coloring extends, and build the
//! extension or a checkable reason why none exists.

pub mod coloring;
pub mod cylinder;
pub mod disk;
pub mod error;
pub mod flow;
pub mod format;
pub mod map;
pub mod result;
pub mod solver;
pub mod testkit;

pub use coloring::{Color, Coloring, Precoloring, Verdict, WindingReport};
pub use error::{Error, Result};
pub use map::{ClosedWalk, CutPiece, Dart, Edge, EdgeId, EmbeddedGraph, End, Sign, Subgraph, SurfaceSignature, Vertex};
pub use result::{SolveResult, SpokeWitness, Witness};
pub use solver::{solve, SolveConfig};

