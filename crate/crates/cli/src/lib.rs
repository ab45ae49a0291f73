//! Command-line front end for `gauge-mps-core`.

pub mod app;
pub mod bundle;
pub mod dto;
pub mod error;
pub mod report;

pub use app::{run, Cli, Env, Outcome};
pub use error::CliError;
