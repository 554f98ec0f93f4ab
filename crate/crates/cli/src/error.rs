use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("numerical failure: {0}")]
    Numerical(#[from] wishprod_core::Error),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    /// 1 check failure, 2 configuration or i/o, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::CheckFailed(_) => 1,
            Self::Config(_) | Self::Io { .. } => 2,
            Self::Numerical(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
