//! Computing and verifying nowhere-zero 6-flows on signed graphs.
//!
//! A signed graph carries a sign on every edge; an orientation assigns a
//! direction mark to every edge end so that positive edges run through a
//! vertex and negative edges point at or away from both ends. A nowhere-zero
//! k-flow is an integer valuation with zero boundary everywhere and values
//! in `±1..±(k-1)`. This crate provides:
//!
//! - [`graph`], [`ops`]: the signed-graph data model and its basic algebra;
//! - [`analysis`]: balance, flow admissibility, cyclic edge-connectivity,
//!   perfect matchings, and a brute-force flow oracle;
//! - [`reduce`]: reduction of arbitrary flow-admissible graphs to cubic form
//!   and lifting of flows back;
//! - [`z6`]: Z₂×Z₃ flow search and normalization to source/near-source form;
//! - [`convert`]: the constructive engine that turns a normalized valuation
//!   into a genuine nowhere-zero 6-flow, and the end-to-end pipeline;
//! - [`small_graphs`]: named instances used throughout the tests.

pub mod analysis;
pub mod convert;
pub mod graph;
pub mod ops;
pub mod reduce;
pub mod small_graphs;
pub mod z6;

pub use graph::{
    ContractionRecord, CoreError, Dir, Edge, EdgeId, EdgeValuation, Orientation, Sign, SignedGraph,
    VertexId, VertexValuation,
};
pub use ops::Role;
