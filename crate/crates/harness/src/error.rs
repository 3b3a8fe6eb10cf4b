use std::path::PathBuf;

use multipath_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("far-field approximation does not hold: {0}")]
    Fraunhofer(CoreError),
    #[error("{context}: {source}")]
    Compute { context: String, source: CoreError },
    #[error("cannot read or write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation { field: field.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 validation, 3 Fraunhofer check, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation { .. } | Self::Compute { .. } => 2,
            Self::Fraunhofer(_) => 3,
            Self::Io { .. } => 4,
        }
    }
}

/// Wraps a core error raised while computing `context`.
pub(crate) fn core(context: &str) -> impl FnOnce(CoreError) -> HarnessError + '_ {
    move |e| match e {
        CoreError::FraunhoferViolated { .. } => HarnessError::Fraunhofer(e),
        other => HarnessError::Compute { context: context.to_string(), source: other },
    }
}
