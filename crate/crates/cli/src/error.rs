use std::path::PathBuf;

use framekit::matrix_file::FormatError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: FormatError,
    },
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] framekit::Error),
}

pub mod exit {
    pub const OK: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const NOT_A_FRAME: u8 = 3;
    pub const NO_REPRESENTATION: u8 = 4;
    pub const CRITERION_FAILED: u8 = 5;
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use framekit::Error as E;
        match self {
            CliError::Usage(_) | CliError::Input { .. } => exit::PARSE,
            CliError::Output { .. } => exit::INTERNAL,
            CliError::Core(e) => match e {
                E::NotAFrame { .. } | E::BaseNotAFrame { .. } => exit::NOT_A_FRAME,
                E::TightFrameExcluded { .. } => exit::CRITERION_FAILED,
                E::NotSquare { .. }
                | E::DimensionMismatch { .. }
                | E::TooFewVectors { .. }
                | E::IndexOutOfRange { .. }
                | E::NonFinite(_)
                | E::InvalidArgument(_)
                | E::PreconditionFailed(_) => exit::PARSE,
                _ => exit::INTERNAL,
            },
        }
    }
}
