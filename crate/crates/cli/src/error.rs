use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_REGION: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_CERTIFICATE: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] dynseq::Error),
    #[error("{0}")]
    Certificate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => EXIT_USAGE,
            CliError::Output { .. } => 1,
            CliError::Certificate(_) => EXIT_CERTIFICATE,
            CliError::Core(e) => match e {
                dynseq::Error::NoAdmissibleRegion { .. } => EXIT_NO_REGION,
                dynseq::Error::UnsupportedDimension(_) => EXIT_DIMENSION,
                dynseq::Error::DegenerateDistance { .. } => 1,
                _ => EXIT_USAGE,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}
