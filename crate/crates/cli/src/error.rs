use thiserror::Error;

/// Failures of a CLI run, classified by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("io: {0}")]
    Io(String),
    #[error("{name}: {0}", name = .0.name())]
    Domain(#[from] birkhoff_core::Error),
    #[error("VerificationFailed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) | CliError::Io(_) => 1,
            CliError::Domain(_) | CliError::Verification(_) => 2,
        }
    }
}
