use weaktrace_core::dynamics::DynamicsError;
use weaktrace_core::netgraph::ParseError;
use weaktrace_core::tsvf::TsvfError;

use crate::config::ConfigError;

/// Exit status for bad input (config, network file, vibration table).
pub const EXIT_VALIDATION: i32 = 1;
/// Exit status for failures while computing or writing.
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{file}: {err}")]
    Parse { file: String, err: ParseError },
    #[error(transparent)]
    Tsvf(#[from] TsvfError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Tsvf(_) | Error::Validation(_) => EXIT_VALIDATION,
            Error::Dynamics(
                DynamicsError::InvalidVibration(_) | DynamicsError::UnknownMirror(_) | DynamicsError::ZeroOverlap,
            ) => EXIT_VALIDATION,
            Error::Dynamics(_) | Error::Io { .. } => EXIT_RUNTIME,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), source }
    }
}
