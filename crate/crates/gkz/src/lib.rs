//! Exact combinatorial analysis of GKZ hypergeometric systems.
//!
//! Given a full-rank integer matrix `A` (d×n) and a rational parameter
//! vector `β`, this crate computes, in exact rational arithmetic:
//!
//! * kernel lattices, lattice indices and finite quotient groups ([`exact`]),
//! * weighted umbrellas (the faces of `conv({a_i/s_i} ∪ {0})` missing the
//!   origin), regular triangulations, and normalized volumes ([`geometry`]),
//! * truncated Γ-series solutions with their Gevrey multi-orders, together
//!   with formal application of the Euler and toric operators ([`series`]),
//! * slopes along coordinate hyperplanes by two independent combinatorial
//!   routes, and candidate indices along higher-codimension subspaces
//!   ([`slopes`]),
//! * solution-space dimension bounds and irregularity dimensions from
//!   volume formulas ([`irregularity`]).
//!
//! Everything except the explicitly labeled diagnostic regression in
//! [`series::gevrey_index_estimate`] is exact: no floating point is used
//! anywhere else.
//!
//! With the default `parallel` feature the subset- and term-enumeration
//! loops run on rayon; disabling the feature yields a fully sequential
//! build with identical (canonically ordered) results.

pub mod exact;
pub mod geometry;
pub mod irregularity;
mod par;
pub mod series;
pub mod slopes;

pub use exact::{Int, Rat};
pub use exact::{IntMatrix, QMatrix};

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not full rank: rank {rank} < {expected}")]
    NotFullRank { rank: usize, expected: usize },
    #[error("lattice index is infinite: rank {rank} < {expected}")]
    InfiniteIndex { rank: usize, expected: usize },
    #[error("columns {columns:?} do not form a simplex (det = 0)")]
    NotASimplex { columns: Vec<usize> },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("non-generic weight: simplex {simplex:?} lies on a cone boundary")]
    NonGenericWeight { simplex: Vec<usize> },
    #[error("retry budget exhausted after {attempts} attempts: {details}")]
    RetryExhausted { attempts: usize, details: String },
    #[error("class is empty at truncation degree {bound}")]
    EmptyClassAtTruncation { bound: u32 },
    #[error("too few terms for a regression estimate: {got} < {need}")]
    TooFewTerms { got: usize, need: usize },
    #[error("pointedness and ZA = Z^d are required here: {reason}")]
    AssumptionsViolated { reason: String },
    #[error("invalid input in field `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Size the global thread pool used by the parallel enumeration paths.
/// Effective once per process; later calls are ignored.
#[cfg(feature = "parallel")]
pub fn configure_threads(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidInput {
            field: "threads".into(),
            reason: e.to_string(),
        })
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_n: usize) -> Result<()> {
    Ok(())
}
