use std::fmt;

use ctl_core::expr::ExprError;
use ctl_core::CtlError;

/// Failures of a CLI run, split by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config or parameters: exit 1.
    Validation(String),
    /// A well-posed run that failed numerically: exit 2.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Validation(m) => write!(f, "invalid input: {m}"),
            Self::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CtlError> for CliError {
    fn from(e: CtlError) -> Self {
        let msg = e.to_string();
        match e {
            CtlError::DimensionMismatch { .. }
            | CtlError::ZeroDimension
            | CtlError::DimensionTooLarge { .. }
            | CtlError::IndexOutOfRange { .. }
            | CtlError::InvalidParameter(_) => Self::Validation(msg),
            CtlError::Expression(ExprError::Domain { .. }) => Self::Numeric(msg),
            CtlError::Expression(_) => Self::Validation(msg),
            _ => Self::Numeric(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Validation(format!("output: {e}"))
    }
}
