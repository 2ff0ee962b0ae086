use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one CLI exit class.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LcsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A computation would exceed a configured budget (DP cells, enumerated tuples).
    #[error("resource limit exceeded: {what} requires {required}, budget is {budget}{hint}")]
    Resource {
        what: String,
        required: String,
        budget: String,
        hint: String,
    },

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },
}

impl LcsError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        LcsError::InvalidInput(msg.into())
    }

    pub(crate) fn resource(
        what: impl Into<String>,
        required: impl ToString,
        budget: impl ToString,
    ) -> Self {
        LcsError::Resource {
            what: what.into(),
            required: required.to_string(),
            budget: budget.to_string(),
            hint: String::new(),
        }
    }

    pub(crate) fn with_hint(self, hint: &str) -> Self {
        match self {
            LcsError::Resource {
                what,
                required,
                budget,
                ..
            } => LcsError::Resource {
                what,
                required,
                budget,
                hint: format!(" ({hint})"),
            },
            other => other,
        }
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        LcsError::Format {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = LcsError> = std::result::Result<T, E>;
