//! Library side of the `spi-solve` CLI: file formats, report schemas, and
//! the experiment harness. The binary in `main.rs` is a thin wrapper so
//! integration tests can drive everything in-process.

pub mod cli;
pub mod error;
pub mod harness;
pub mod mm;
pub mod reports;

pub use error::CliError;
