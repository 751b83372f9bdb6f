//! Combinatorial models of medial axes of 3-dimensional regions: stratified
//! complexes of sheets glued along a junction network, their decomposition
//! into irreducible components, and the resulting graph, group, and homology
//! invariants.

pub mod graph;

pub use graph::{EdgeId, ExtendedGraph, GraphError, VertexId, VertexKind};
