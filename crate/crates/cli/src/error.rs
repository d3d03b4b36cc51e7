use std::fmt;

use singcurve::{Error, ParseError, PointSetError, SemigroupError};

/// Failure of a subcommand, carrying its exit status class.
#[derive(Debug)]
pub enum CliError {
    /// Malformed flags or arguments (exit 2).
    Usage(String),
    /// Invalid semigroup input (exit 3).
    Semigroup(SemigroupError),
    /// Invalid or degenerate point configuration (exit 4).
    Configuration(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Semigroup(_) => 3,
            CliError::Configuration(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Semigroup(e) => write!(f, "semigroup input error: {e}"),
            CliError::Configuration(m) => write!(f, "configuration error: {m}"),
        }
    }
}

impl From<SemigroupError> for CliError {
    fn from(e: SemigroupError) -> Self {
        CliError::Semigroup(e)
    }
}

impl From<PointSetError> for CliError {
    fn from(e: PointSetError) -> Self {
        CliError::Configuration(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Configuration(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Semigroup(s) => CliError::Semigroup(s),
            other => CliError::Configuration(other.to_string()),
        }
    }
}
