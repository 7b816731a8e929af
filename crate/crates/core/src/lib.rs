//! Diagonal of the pseudoinverse of a graph Laplacian.
//!
//! [`approx_diag`] estimates every `L†_uu` of a connected weighted graph in
//! near-linear time by sketching `W^{1/2} B L†` with a random sign matrix
//! and solving one Laplacian system per sketch row. The [`oracle`] module
//! provides dense and combinatorial ground truth, and [`models`] generates
//! Koch networks, uniform recursive trees and pseudofractal webs together
//! with closed forms for their diagonals and Kirchhoff indices.

pub mod error;
pub mod graph;
pub mod models;
pub mod oracle;
pub mod sketch;
pub mod solver;
mod unionfind;

pub use error::{Error, Result};
pub use graph::{parse_edge_list, Edge, Graph, ParseOptions, ParsedGraph, Subgraph};
pub use oracle::{
    error_metrics, exact_pseudoinverse_diag, exact_resistance, foster_check, forest_weight_diag,
    kirchhoff_exact, node_resistance_distance, relative_errors, DensePseudoinverse, ErrorReport,
};
pub use sketch::{
    approx_diag, approx_diag_with, jl_dimension, sketch_rows, solver_tolerance, DiagEstimate,
    SketchConfig, SketchParams,
};
pub use solver::{lapl_solve, LaplacianSolver, Preconditioner, Solution, SolveOptions};
