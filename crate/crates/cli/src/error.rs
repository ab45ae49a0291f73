use std::path::PathBuf;

/// Failures that end a run with exit status 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: parse error at {pointer}: {message}")]
    Parse { path: PathBuf, pointer: String, message: String },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] gauge_mps_core::Error),
}

impl CliError {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        let pointer = pointer.into();
        CliError::Schema { pointer: if pointer.is_empty() { "/".into() } else { pointer }, message: message.into() }
    }

    /// Prefixes the pointer of a schema error with the file it came from.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        match self {
            CliError::Schema { pointer, message } => {
                CliError::Schema { pointer: format!("{}#{pointer}", path.display()), message }
            }
            other => other,
        }
    }
}
