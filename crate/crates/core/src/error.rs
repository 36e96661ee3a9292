//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by graph analyses.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix that must be inverted has a pivot below tolerance,
    /// signalling a forbidden value of the spectral parameter.
    #[error("singular pivot while inverting {context} (pivot magnitude {pivot:.3e})")]
    SingularPivot { context: &'static str, pivot: f64 },

    /// Operation requires all internal edges to share one length.
    #[error("graph is not equilateral")]
    NotEquilateral,

    /// Operation requires every vertex scattering matrix to be independent
    /// of the spectral parameter.
    #[error("coupling at vertex `{vertex}` depends on k")]
    KDependentCoupling { vertex: String },

    /// Operation requires the exact rational pipeline (standard or
    /// Dirichlet coupling at every vertex).
    #[error("exact pipeline unavailable: vertex `{vertex}` has general coupling")]
    NotExact { vertex: String },

    /// Cycle or pseudo-orbit enumeration exceeded the configured cap.
    #[error("enumeration exceeded cap of {cap} items")]
    CapExceeded { cap: usize },

    /// The root finder failed to converge within the iteration budget.
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// A structural assumption of the requested operation does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A reduction plan step deletes a bond that earlier steps made
    /// undeletable (a ghost edge leads to it, or it was already deleted).
    #[error("reduction plan conflict at bond `{bond}`: {reason}")]
    PlanConflict { bond: String, reason: String },

    /// Input could not be parsed into a metric graph.
    #[error("invalid graph input: {0}")]
    Parse(String),

    /// A computed quantity violated a theorem-backed invariant; indicates
    /// a numerical breakdown or a bug.
    #[error("invariant check failed: {0}")]
    InvariantViolated(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
