//! Library side of the `deepcore` binary: argument definitions, CSV input,
//! report formatting and the `check`/`bench` grids. [`run`] executes a parsed
//! command against arbitrary writers so it can be driven in-process.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use commands::{run, Cli, Command};
pub use error::{CliError, CliResult};
