//! File formats, argument parsing and commands for the `floquet-pacs` binary.

pub mod args;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use cli::run;
pub use error::{CliError, CliResult, EXIT_ERROR, EXIT_OK, EXIT_UNSTABLE};
