use thiserror::Error;
use twistzeta_core::Error as CoreError;

/// Failures surfaced by the command line.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Core(CoreError),
}

impl CliError {
    /// Machine-readable code placed in error reports.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Input(_) => "INPUT",
            CliError::Io { .. } => "IO",
            CliError::Core(e) => match e {
                CoreError::NotNormal => "N_NOT_NORMAL",
                CoreError::NotPGroup(_) => "N_NOT_P_GROUP",
                CoreError::TooLarge(_) => "GROUP_TOO_LARGE",
                CoreError::NotAssociative(..) => "NOT_ASSOCIATIVE",
                CoreError::Input(_) => "INPUT",
                _ => "INTERNAL",
            },
        }
    }

    /// Exit status: 2 for bad input, 1 for failures inside the computation.
    pub fn exit_code(&self) -> i32 {
        match self.code() {
            "INTERNAL" => 1,
            _ => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}
