use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_CHAIN_VIOLATION: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad flag: {0}")]
    BadFlag(String),

    #[error("empty grid: {param}={start}:{stop}:{step} has no points")]
    EmptyGrid { param: String, start: f64, stop: f64, step: f64 },

    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("cannot write {target}: {source}")]
    Write { target: String, source: std::io::Error },

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Validation(#[from] photon_npt_core::Error),

    #[error("at {param}={value}: {source}")]
    SweepPoint { param: String, value: f64, source: Box<CliError> },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::BadFlag(_) | CliError::EmptyGrid { .. } => EXIT_USAGE,
            CliError::SweepPoint { source, .. } => source.exit_code(),
            _ => EXIT_VALIDATION,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
