use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("unknown experiment `{0}` (run `ipstar-lab list` for the registry)")]
    UnknownExperiment(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Core(#[from] ipstar_core::Error),

    #[error("certificate failed re-verification: {0}")]
    Recheck(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        use ipstar_core::Error as E;
        match self {
            LabError::UnknownExperiment(_) | LabError::InvalidConfig(_) => 2,
            LabError::Core(E::GuardExceeded { .. } | E::LengthGuard { .. }) => 3,
            LabError::Core(E::InvalidParameter(_)) => 2,
            LabError::Core(E::RecheckFailed(_)) | LabError::Recheck(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
