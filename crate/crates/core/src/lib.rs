//! Classification of cyclic Grassmannian (constant-dimension) codes.
//!
//! The pipeline enumerates the cyclic-shift orbits of `G_q(n, k)` inside
//! `F_{q^n}`, links orbits whose union keeps a target minimum distance, and
//! solves exact maximum-(weight-)clique problems on that graph. A clique is
//! a cyclic code; its weight (sum of orbit sizes) is its number of codewords.

pub mod bitset;
pub mod cache;
pub mod classify;
pub mod clique;
pub mod error;
pub mod field;
pub mod graph;
pub mod orbits;
pub mod par;
pub mod subspace;

pub use cache::OrbitCache;
pub use classify::{
    run_algorithm1, table, verify_certificate, Certificate, ClassificationReport, ClassifyOptions, FixedProfile,
    Verdict,
};
pub use clique::{CliqueResult, Objective, SolverOptions};
pub use error::{ClassifyError, FieldError, GraphError, OrbitError, SubspaceError};
pub use graph::{build_graph, CompatGraph, GraphOptions};
pub use field::{default_primitive_poly, FieldCtx, FieldParams};
pub use orbits::{enumerate_orbits, gaussian_binomial, EnumOptions, Orbit, OrbitSet};
pub use par::Exec;
pub use subspace::{intersection_dim, subspace_distance, Subspace};
