use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] sparse_gft::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("replay diverged: {0}")]
    Replay(String),
}

impl CliError {
    pub fn input(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Input {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        use sparse_gft::Error as E;
        match self {
            CliError::Input { .. } | CliError::Invalid(_) => 2,
            CliError::Core(E::DegenerateLabels) => 3,
            CliError::Core(E::NoConvergence(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Write { .. } | CliError::Replay(_) => 1,
        }
    }
}
