//! Process-level error classification.
//!
//! Every failure surfaced by the command-line layer falls into one of four
//! classes, each with a fixed exit code: usage errors (1), expression parse
//! errors (2), mathematical domain errors (3), and internal faults (4).
//! Success exits with 0.

use std::fmt;

use crate::expr::ParseError;

/// A classified command-line failure; [`CliError::exit_code`] gives the
/// process exit code for the class.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad invocation: unusable flag values, malformed configuration,
    /// missing arguments.
    Usage(String),
    /// An expression argument failed to parse; `flag` names the offending
    /// argument.
    Parse { flag: String, error: ParseError },
    /// Mathematically invalid input (|q| = 1, degenerate coefficient,
    /// division by an identically zero expression, ...).
    Math(String),
    /// A fault in the tool itself (failed output write, broken invariant).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse { .. } => 2,
            CliError::Math(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Parse { flag, error } => {
                write!(f, "cannot parse {flag}: {error}")
            }
            CliError::Math(msg) => write!(f, "{msg}"),
            CliError::Internal(msg) => write!(f, "internal: {msg}"),
        }
    }
}

impl From<qriccati::Error> for CliError {
    fn from(err: qriccati::Error) -> Self {
        CliError::Math(err.to_string())
    }
}
