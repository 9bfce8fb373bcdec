//! Command-line front end for `zol-core`: problem files, reports and the
//! `zol` binary's commands.

pub mod app;
pub mod ket;
pub mod problem_file;
pub mod report;

/// Failures, each mapped to a process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    File(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Run(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Cap(_) => 3,
            CliError::File(_) => 4,
        }
    }
}

impl From<zol_core::Error> for CliError {
    fn from(e: zol_core::Error) -> Self {
        use zol_core::Error as E;
        let msg = e.to_string();
        match e {
            E::CapExceeded { .. } | E::TooManyBits { .. } => CliError::Cap(msg),
            E::ProblemOutOfRange { .. }
            | E::UnknownSetting(..)
            | E::InvalidLabel { .. }
            | E::InvalidBits(..)
            | E::IncompatibleKind { .. }
            | E::InvalidProblem(..) => CliError::Usage(msg),
            _ => CliError::Run(msg),
        }
    }
}
