//! Pipelines behind the `symjoin` binary.

pub mod failure;
pub mod inputs;
pub mod pipeline;
pub mod repro;

pub use failure::{CliError, ExitClass};
