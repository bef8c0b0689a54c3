//! Command implementations behind the `hlmoments` binary.

pub mod commands;
pub mod config;
mod error;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
