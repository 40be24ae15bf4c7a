use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] lmg_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize },
}

impl CliError {
    /// 1 computation refused or failed, 2 invalid config, 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(lmg_core::Error::InvalidParams(_)) => 2,
            CliError::Compute(_) | CliError::Io { .. } => 1,
            CliError::VerifyFailed { .. } => 3,
        }
    }
}
