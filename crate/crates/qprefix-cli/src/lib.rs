//! Support library for the `qprefix` binary: codebook file handling and
//! plain-text rendering. Kept as a library target so integration tests
//! can drive the same reader/writer the commands use.

pub mod codebook;
pub mod render;
