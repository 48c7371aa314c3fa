//! Configuration, verification suites, reports and grid exports behind the
//! `gausswig` executable.

pub mod config;
pub mod report;
pub mod run;
pub mod states;
pub mod suite;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration or arguments; exit status 2.
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Library(#[from] gausswig::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Library(_) => 1,
        }
    }
}
