use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Model(#[from] qcorr::Error),
    #[error("{failed} of {total} sweep points failed")]
    SweepFailures { failed: usize, total: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Model(e) if e.is_input_error() => 2,
            CliError::Model(_) | CliError::SweepFailures { .. } => 3,
            CliError::Io { .. } => 2,
        }
    }

    /// Variant name for the machine-readable error line.
    pub fn kind(&self) -> String {
        match self {
            CliError::Input(_) => "InvalidInput".into(),
            CliError::Model(e) => format!("{e:?}").split([' ', '{', '(']).next().unwrap_or("Model").to_string(),
            CliError::SweepFailures { .. } => "SweepFailures".into(),
            CliError::Io { .. } => "Io".into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
