//! Tape embedding of qubit strings and the operations defined through it.
//!
//! A classical string `s` occupies a one-way infinite tape by writing its
//! bits into a chosen set of cells (in increasing order) and blanks
//! everywhere else. Blanks are orthogonal to bits (structurally, not
//! numerically), which is what gives restrictions their decoherence
//! behaviour and makes some tensor placements lose norm.

pub mod index_set;
pub mod ops;
pub mod oracle;
pub mod state;

pub use index_set::IndexSet;
pub use ops::{
    concat, concat_classical, prefix, restrict, tensor, tensor_at, tensor_at_vec, tensor_vec,
};
pub use oracle::{duality_deviation, oracle_restrict, restrict_oracle_deviation, ORACLE_MAX_CELLS};
pub use state::{embed_operator, embed_vector, extract, Cell, Extracted, TapeConfig, TapeState};
