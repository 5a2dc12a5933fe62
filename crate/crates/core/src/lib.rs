//! Combinatorics and dynamics of finitely separated graphs.
//!
//! Layers, bottom up: [`graph`] and [`format`] hold the data model,
//! [`admissibility`] turns path questions into digraph reachability,
//! [`condition_n`], [`decomposition`] and [`orientation`] implement the
//! structural analyses, [`dynamics`] simulates the partial action on
//! finite-depth configurations and [`monoid`] handles the graph monoid.

pub mod admissibility;
pub mod catalog;
pub mod condition_n;
pub mod decomposition;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod orientation;
pub mod graph;
pub mod monoid;
pub mod word;

pub use admissibility::{Path, ReturnMode, TransitionDigraph};
pub use error::{AnalysisError, GraphError, LiteralError, ParseError};
pub use graph::{EdgeId, GroupId, SeparatedGraph, VertexId, VertexSet};
pub use word::{Symbol, Word};
