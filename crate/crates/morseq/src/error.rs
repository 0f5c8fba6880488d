//! Error type shared by all operations in this crate.

use thiserror::Error;

/// Errors produced by complex operations, homology computations, sequence
/// construction, and file parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// A facet given to a closure constructor is not a valid simplex.
    #[error("invalid facet: {0}")]
    InvalidFacet(String),

    /// A simplex passed to an operation does not belong to the complex
    /// (or to the relevant basis).
    #[error("not a face of the complex: {0}")]
    NotAFace(String),

    /// A chain was assembled from simplices of different dimensions.
    #[error("chain members must all have the same dimension")]
    HeterogeneousChain,

    /// An elementary move (expand, collapse, fill, perforate) violates one of
    /// its legality conditions. The clause names the violated condition.
    #[error("illegal move: {clause}")]
    IllegalMove {
        /// The legality condition that failed.
        clause: String,
    },

    /// A presented chain complex failed the boundary-of-boundary test.
    #[error("boundary of boundary is nonzero in degree {degree}")]
    NotAChainComplex {
        /// Degree in which the composite boundary failed to vanish.
        degree: usize,
    },

    /// A chain has the wrong dimension for the requested degree.
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch {
        /// Degree required by the operation.
        expected: usize,
        /// Dimension of the chain that was supplied.
        found: usize,
    },

    /// Two Morse sequences build different complexes, so they cannot be
    /// compared.
    #[error("the two sequences do not build the same complex")]
    TargetMismatch,

    /// Flow stabilization did not reach a fixed point within the iteration
    /// cap. This indicates an internal error: the gradient flow of a Morse
    /// sequence always stabilizes.
    #[error("flow did not stabilize within {cap} iterations")]
    IterationCap {
        /// Number of iterations that were attempted.
        cap: usize,
    },

    /// A discrete vector field contains a closed gradient path, so it is not
    /// the gradient field of any Morse sequence.
    #[error("the vector field contains a closed gradient path")]
    CyclicField,

    /// A function is not basic, so it does not induce a Morse sequence
    /// directly. The property names the failed requirement.
    #[error("function is not basic: {property}")]
    NotBasic {
        /// The requirement that failed (totality, monotonicity,
        /// semi-injectivity, or genericity).
        property: String,
    },

    /// A function on a complex is not a discrete Morse function.
    #[error("not a discrete Morse function: {reason}")]
    NotAMorseFunction {
        /// Explanation of the failure.
        reason: String,
    },

    /// A text or JSON input could not be parsed.
    #[error("parse error at line {line}: {reason}")]
    Parse {
        /// One-based line number of the offending input (0 when the format
        /// has no meaningful line structure).
        line: usize,
        /// Explanation of the failure.
        reason: String,
    },

    /// A list of items does not replay into a valid Morse sequence.
    #[error("invalid Morse sequence: {reason}")]
    InvalidSequence {
        /// Explanation, including the index of the first offending item.
        reason: String,
    },

    /// A set of pairs does not form a discrete vector field on the complex.
    #[error("invalid vector field: {reason}")]
    InvalidVectorField {
        /// Explanation of the failure.
        reason: String,
    },

    /// An underlying I/O operation failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
