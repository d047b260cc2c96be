//! Spectral radius, matching and fractional matching numbers of small graphs,
//! the extremal families that maximize the spectral radius at a fixed
//! (fractional) matching number, spectral certificates, and exhaustive checks.

pub mod certify;
pub mod extremal;
pub mod formats;
pub mod graph;
pub mod half;
pub mod matching;
pub mod numfmt;
pub mod poly;
pub mod spectral;
pub mod verify;

pub use graph::{Graph, GraphError, VertexSet};
pub use half::HalfIntegral;
