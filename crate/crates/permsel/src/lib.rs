//! File formats and the `permsel` command-line front end.
//!
//! The algorithms live in [`permsel_core`]; this crate reads and writes the
//! text formats and drives batch runs.

pub mod cli;
pub mod format;

pub use format::FormatError;
