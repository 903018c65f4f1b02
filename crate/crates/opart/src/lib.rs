//! File formats, reports, the parallel driver and the command-line front
//! end for `opart-core`.

pub mod cache;
pub mod cli;
pub mod error;
pub mod parallel;
pub mod report;

pub use error::{CliError, Result};
