//! File formats, reports, property sweeps and the command-line front end
//! for `gspin-core`.

pub mod report;
pub mod render;
pub mod schema;
pub mod sweep;


#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error("{0}")]
    Unsupported(String),
    #[error("property failure: {0}")]
    Failure(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => exit::INVALID,
            CliError::Failure(_) => exit::FAILURE,
            CliError::Unsupported(_) => exit::UNSUPPORTED,
        }
    }
}

impl From<gspin_core::Error> for CliError {
    fn from(e: gspin_core::Error) -> Self {
        match e {
            e @ gspin_core::Error::Unsupported(_) => CliError::Unsupported(e.to_string()),
            gspin_core::Error::NotElementaryAbelian(_) => CliError::Failure(e.to_string()),
            other => CliError::Invalid(vec![other.to_string()]),
        }
    }
}

pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID: u8 = 2;
    pub const FAILURE: u8 = 3;
    pub const UNSUPPORTED: u8 = 4;
}
