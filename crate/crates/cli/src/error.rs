use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unusable configuration or input; exit status 2.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical routine failed on a valid input; exit status 1.
    #[error("{0}")]
    Compute(#[from] ahm_core::Error),

    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}
