pub mod app;
pub mod commands;
pub mod error;
pub mod output;
pub mod problem;

pub use app::{execute, Cli};
pub use error::{CliError, CliResult};
