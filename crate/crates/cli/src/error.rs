use std::fmt;
use std::path::Path;

use lcslab::LcsError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(LcsError),
    Io {
        path: String,
        source: std::io::Error,
    },
    Other(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 usage, 3 resource refusal, 4 data format, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Lib(LcsError::InvalidInput(_)) => 2,
            CliError::Lib(LcsError::Resource { .. }) => 3,
            CliError::Lib(LcsError::Format { .. }) => 4,
            CliError::Io { .. } | CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{path}: {source}"),
            CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<LcsError> for CliError {
    fn from(e: LcsError) -> Self {
        CliError::Lib(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Other(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(format!("json: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
