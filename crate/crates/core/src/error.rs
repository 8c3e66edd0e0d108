use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent caller input (shapes, sizes, flags).
    #[error("input error: {0}")]
    Input(String),

    /// A weight matrix failed validation at a specific index pair.
    #[error("validation error at ({row}, {col}): {reason}")]
    Validation {
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("capacity error: n = {n} exceeds the enumeration cap of {max}")]
    Capacity { n: usize, max: usize },

    #[error("{path}: {message}")]
    File { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn file(path: impl AsRef<std::path::Path>, msg: impl Into<String>) -> Self {
        Error::File {
            path: path.as_ref().display().to_string(),
            message: msg.into(),
        }
    }

    /// Process exit code: 3 for numeric failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) => 3,
            _ => 2,
        }
    }
}
