//! Hamilton-cycle discrepancy in oriented graphs under Ore-type conditions.
//!
//! An oriented graph has at most one edge between any two vertices. For a
//! Hamilton cycle `C`, `sigma_max(C)` counts the edges pointing in the
//! dominant traversal direction. This crate builds the extremal graphs for
//! which `sigma_max` cannot exceed `sigma2(G)/2`, finds discrepancy-optimal
//! Hamilton cycles exactly and heuristically, checks the `sigma2(G)/2` bound
//! exhaustively on small graphs, and runs a small-scale absorbing-path
//! construction (absorbing path, reservoir, path cover, connection,
//! absorption) end to end.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod absorbers;
pub mod bitset;
pub mod discrepancy;
pub mod exact;
pub mod extremal;
pub mod graph;
pub mod harness;
pub mod heuristic;
pub mod pipeline;
pub mod rng;
pub mod tilings;

pub use discrepancy::{
    sigma_counts, validate_certificate, Certificate, CycleCertificate, Method, PathCertificate, Spanning,
    Validation,
};
pub use extremal::{build_extremal, extremal_graph, extremal_params, feasible_h_values, ExtremalParams};
pub use graph::{compose, parse_graph, serialize_graph, GraphError, OrientedGraph};
