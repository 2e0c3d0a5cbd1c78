//! Front end for `wavectl-core`: run configuration, CSV field output, JSON
//! verification reports and the `wavectl` command line.

pub mod cli;
pub mod commands;
pub mod config;
pub mod report;
pub mod table;

use std::fmt;

pub use cli::run;
use report::Status;

/// Bad flags, config files or profile text. Exit code 1.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug)]
pub enum RunError {
    Usage(UsageError),
    Solver(wavectl_core::Error),
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e)
    }
}

impl From<wavectl_core::Error> for RunError {
    fn from(e: wavectl_core::Error) -> Self {
        RunError::Solver(e)
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(e) => write!(f, "{e}"),
            RunError::Solver(e) => write!(f, "{e}"),
        }
    }
}

impl RunError {
    /// Status and the report's `failure.kind`.
    pub fn classify(&self) -> (Status, &'static str) {
        use wavectl_core::Error as E;
        match self {
            RunError::Usage(_) => (Status::UsageError, "usage"),
            RunError::Solver(e) => match e {
                E::Syntax { .. } | E::UnknownIdentifier { .. } | E::Invalid(_) | E::Cfl { .. } | E::Grid(_) => {
                    (Status::UsageError, "usage")
                }
                E::Compatibility(_) => (Status::Rejected, "incompatible"),
                E::Inadmissible(_)
                | E::ResonantMode { .. }
                | E::NotPeriodic { .. }
                | E::Certificate(_)
                | E::NegativeCurvature { .. }
                | E::Dimension(_)
                | E::Perturbation(_) => (Status::Rejected, "inadmissible"),
                E::Bridge { .. }
                | E::Positivity { .. }
                | E::Quadrature { .. }
                | E::NonFinite(_)
                | E::Extrapolation(_)
                | E::Domain { .. }
                | E::DerivativeOrder(_)
                | E::NotResonant { .. } => (Status::VerificationFailed, "verification"),
            },
        }
    }
}
