//! Indeterminate-length quantum bit strings.
//!
//! A *qubit string* is a vector (or density operator) on the string space:
//! the Hilbert space whose orthonormal basis is the set of all finite
//! classical bit strings, including the empty string λ. Superpositions may
//! mix basis strings of different lengths, which is what makes prefixes,
//! restrictions and concatenation non-trivial.
//!
//! The crate is organised in four layers:
//!
//! - [`bits`], [`vector`], [`operator`]: classical strings and sparse
//!   complex vectors/operators over them, with lengths and the length
//!   observable.
//! - [`tape`]: embedding of qubit strings into a one-way infinite tape of
//!   `{0, 1, #}` cells, and the operations that need it: restriction
//!   (partial trace), indexed tensor products, concatenation, plus a dense
//!   brute-force oracle for differential checks.
//! - [`analysis`]: prefix-free verification (four equivalent conditions),
//!   Gram–Schmidt orthonormalization, distinguishability, the weight
//!   function and the quantum Kraft inequality report.
//! - [`dsl`]: a small expression language (`1/sqrt(2)*|1> + 1/sqrt(2)*|01>`,
//!   `dm(p)^2`, `v (x)[3,4] w`, …) parsed to an AST and evaluated against
//!   the layers above.
//!
//! Unnormalized vectors and operators are first-class throughout: placing
//! factors on bad cell sets legitimately loses norm, and the library reports
//! that instead of erroring.

pub mod analysis;
pub mod bits;
pub mod dsl;
pub mod error;
pub mod operator;
pub mod random;
pub mod tape;
pub mod vector;

pub use bits::BitString;
pub use error::{AnalysisError, CoreError, IndexSetError, TapeError};
pub use operator::QOperator;
pub use tape::IndexSet;
pub use vector::QVector;

/// Complex scalar used for all amplitudes and operator entries.
pub type Complex = num_complex::Complex64;

/// Default comparison tolerance: orthogonality, normalization, support and
/// inequality checks all treat magnitudes at or below this as zero.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Amplitude prune tolerance. Stored sparse entries with magnitude below
/// this are dropped after arithmetic, keeping maps canonical. Kept well
/// below [`DEFAULT_TOLERANCE`] so pruning can never mask an overlap the
/// comparison tolerance would have seen.
pub const PRUNE_TOLERANCE: f64 = 1e-12;

/// Inner product `⟨v|w⟩ = Σ_s conj(v_s)·w_s`, conjugate-linear in the first
/// argument.
pub fn inner_product(v: &QVector, w: &QVector) -> Complex {
    v.inner(w)
}

// keep the README's library example compiling
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
