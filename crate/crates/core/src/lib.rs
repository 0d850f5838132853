//! Continuous-time quantum walks on graphs with fully connected vertices.
//!
//! The walk from a fully connected vertex `w` generated by the Laplacian stays
//! in a two-dimensional invariant subspace whatever the rest of the graph
//! looks like. This crate builds those subspaces numerically and in closed
//! form, and uses them for spatial search and quantum transport.

pub mod applications;
pub mod engine;
pub mod error;
pub mod graph;
pub mod krylov;
pub mod linalg;

pub use error::{CtqwError, Result};
pub use graph::{Graph, VertexSet};
pub use linalg::{ComplexOperator, StateVector};
