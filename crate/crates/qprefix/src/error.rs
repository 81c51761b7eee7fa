//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Errors from string-space vectors and operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    /// Length queries are undefined on the zero vector / zero operator.
    #[error("operation undefined on zero {0}: no supported string")]
    ZeroSupport(&'static str),

    /// A state vector was required to be normalized.
    #[error("vector is not normalized: squared norm {squared_norm} deviates from 1 by more than {tolerance}")]
    NotNormalized { squared_norm: f64, tolerance: f64 },

    /// A density operator was required to have unit trace.
    #[error("operator trace {trace} deviates from 1 by more than {tolerance}")]
    TraceNotOne { trace: Complex64, tolerance: f64 },
}

/// Errors from [`crate::IndexSet`] construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexSetError {
    #[error("cell indices must be >= 1")]
    ZeroIndex,

    #[error("cell indices must be distinct")]
    DuplicateIndex,

    #[error("invalid range [{start},{end}]: end must be >= start - 1")]
    InvalidRange { start: usize, end: usize },
}

/// Errors from tape embeddings and tape-mediated operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TapeError {
    /// A string does not fit into the available cells.
    #[error("capacity exceeded: string of length {needed} does not fit into {available} available cell(s)")]
    Capacity { needed: usize, available: usize },

    /// The plain tensor product requires its first factor to be a length
    /// eigenstate; use the indexed tensor product for anything else.
    #[error("first factor is not a length eigenstate (supported lengths {lengths:?}); use tensor_at with an explicit index set")]
    NotLengthEigenstate { lengths: Vec<usize> },

    /// Dense oracle size guard.
    #[error("oracle guard: {cells} cells exceeds the maximum of {max} (dense dimension 3^N)")]
    OracleGuard { cells: usize, max: usize },

    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Errors from code-set analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    /// A code set must not contain the zero vector.
    #[error("code set contains a zero vector at index {index}")]
    ZeroVector { index: usize },

    /// The set failed the orthonormality check.
    #[error("vectors {i} and {j} are not orthonormal: <e_{i}|e_{j}> = {value}")]
    NotOrthonormal {
        i: usize,
        j: usize,
        value: Complex64,
    },

    /// A basis rotation must be unitary.
    #[error("rotation matrix is not unitary within tolerance (max deviation {deviation})")]
    NotUnitary { deviation: f64 },

    /// A basis rotation must match the code set size.
    #[error("rotation matrix is {rows}x{cols} but the code set has {expected} vectors")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
    },

    #[error(transparent)]
    Core(#[from] CoreError),
}
