use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("config error in {path}: {message}")]
    ConfigFile { path: PathBuf, message: String },
    #[error("solver error: {0}")]
    Solver(#[from] spikedtrio::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::ConfigFile { .. } => 2,
            // malformed potentials and grids are configuration problems even
            // though the library reports them
            CliError::Solver(
                spikedtrio::Error::InvalidSpec(_)
                | spikedtrio::Error::InvalidGrid(_)
                | spikedtrio::Error::ZeroExponent,
            ) => 2,
            CliError::Solver(_) | CliError::Io { .. } => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
