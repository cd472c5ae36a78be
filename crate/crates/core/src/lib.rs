//! Joint intersection statistics of uniform random perfect matchings.
//!
//! Given a host graph whose perfect matchings carry the uniform measure
//! (the complete graph on `2n` vertices, the complete graph minus a sparse
//! forbidden edge set, or a balanced complete multipartite graph under
//! *balanced* perfect matchings) and a family of bounded-degree edge sets
//! `D_1, ..., D_l`, this crate computes the joint law of the intersection
//! counts `X_m = |E(R) ∩ E(D_m)|`:
//!
//! * exactly, via inclusion-exclusion generating functions in
//!   arbitrary-precision rational arithmetic, or by brute-force enumeration
//!   on small hosts;
//! * empirically, via exactly-uniform seeded samplers and a Monte Carlo
//!   harness.
//!
//! The [`dist`] module supplies multivariate Poisson reference laws
//! (independent, or correlated through an overlap decomposition) and
//! total-variation comparisons. Total variation here is
//! `Σ_k |P(k) − Q(k)|`, **without** the customary 1/2 factor; callers
//! wanting the normalized convention should halve reported values.
//!
//! All exact computations use big-integer rationals; floating point enters
//! only in Poisson truncation, total-variation reporting, and Monte Carlo
//! frequencies. Data-parallel inner loops (Monte Carlo batches, per-component
//! profile counting) run on rayon when the default `parallel` feature is
//! enabled and fall back to sequential execution without it; results are
//! bit-identical either way.

use thiserror::Error;

pub mod dist;
pub mod exact;
pub mod exec;
pub mod graphs;
pub mod model;
pub mod pmf;
pub mod profile;
pub mod sample;

pub use exec::ExecMode;
pub use graphs::{
    decompose_family, intersect_profile, Decomposition, Edge, HostGraph, HostKind, Matching,
    SubgraphFamily, Vertex,
};
pub use pmf::{ExactPmf, FloatPmf, JointPmf};
pub use profile::{IntersectionProfile, ProfileShape};

/// Errors produced across the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A multipartite host needs at least two parts.
    #[error("multipartite host needs r >= 2 (got {0})")]
    InvalidPartition(u32),
    /// The forbidden edge set leaves no perfect matching at this host size.
    #[error("forbidden set too dense: no perfect matching of the {vertices}-vertex host avoids it")]
    ForbiddenTooDense { vertices: u64 },
    /// A self-loop or an edge with an endpoint outside the vertex range.
    #[error("malformed edge ({u}, {v})")]
    MalformedEdge { u: u32, v: u32 },
    /// Host parameters must be positive.
    #[error("host size parameter n must be >= 1")]
    EmptyHost,
    /// The host would have more vertices than the vertex index type allows.
    #[error("host with {0} vertices is beyond the supported vertex range")]
    HostTooLarge(u64),
    /// Two family members share an edge although disjoint mode was requested.
    #[error("family members {a} and {b} share edge ({u}, {v}) in disjoint mode")]
    OverlapInDisjointMode { a: usize, b: usize, u: u32, v: u32 },
    /// A family edge lies in the host's forbidden set.
    #[error("family edge ({u}, {v}) lies in the forbidden set")]
    EdgeInForbiddenSet { u: u32, v: u32 },
    /// An edge is not present in the host graph.
    #[error("edge ({u}, {v}) is not an edge of the host")]
    EdgeOutOfHost { u: u32, v: u32 },
    /// The family list was empty.
    #[error("a subgraph family needs at least one member")]
    EmptyFamily,
    /// Overlap decomposition has 2^l - 1 pieces; l is capped to keep it enumerable.
    #[error("family count {0} exceeds the supported maximum of 16")]
    TooManyFamilies(usize),
    /// A set of edges that was expected to be a matching has two incident edges.
    #[error("edges ({}, {}) and ({}, {}) share a vertex", .first.0, .first.1, .second.0, .second.1)]
    NotAMatching { first: (u32, u32), second: (u32, u32) },
    /// Enumeration or lattice size above the configured cap.
    #[error("problem size {size} exceeds the cap of {cap}")]
    TooLargeToEnumerate { size: u64, cap: u64 },
    /// A profile entry exceeds the corresponding family edge count.
    #[error("profile entry exceeds the family edge count at coordinate {0}")]
    ProfileOutOfRange(usize),
    /// The profile asks for more pairwise disjoint edges than the host admits.
    #[error("profile too large for the host (extension probability is zero)")]
    ProfileTooLarge,
    /// The inclusion-exclusion expansion produced a negative mass: an engine bug.
    #[error("inclusion-exclusion expansion produced a negative probability mass")]
    NegativeMass,
    /// Conditioning event has probability zero.
    #[error("no perfect matching avoids the forbidden set")]
    ZeroConditioningMass,
    /// Two distributions live on lattices of different dimension.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    /// Two coefficient series live on different profile shapes.
    #[error("coefficient shapes differ")]
    ShapeMismatch,
    /// The rejection sampler ran out of attempts.
    #[error("rejection sampler exceeded {0} attempts")]
    RejectionBudgetExceeded(u64),
    /// An operation received a host kind it does not support.
    #[error("{op} does not support {kind:?} hosts")]
    UnsupportedHost { op: &'static str, kind: HostKind },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
