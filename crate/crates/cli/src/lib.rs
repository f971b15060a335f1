//! Front end for `rankone`: configuration, run directories and the
//! `find`, `sweep`, `converge` and `lyapunov` commands.
//!
//! Every number written by a command comes from a library call; this crate
//! only arranges inputs and persists outputs.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{cmd_converge, cmd_find, cmd_lyapunov, cmd_sweep, with_workers, Outcome, SweepRecord};
pub use config::RunConfig;
pub use output::RunDir;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error(transparent)]
    Numeric(rankone::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Exhausted(_) => 3,
            CliError::Numeric(_) | CliError::Io(_) => 4,
        }
    }
}

impl From<rankone::Error> for CliError {
    fn from(e: rankone::Error) -> Self {
        use rankone::Error as E;
        match e {
            E::InvalidSystem(_) | E::PreconditionViolated(_) => CliError::Config(e.to_string()),
            E::SearchExhausted(m) => CliError::Exhausted(m),
            other => CliError::Numeric(other),
        }
    }
}
