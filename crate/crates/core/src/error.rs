//! Crate-wide error type.
//!
//! All fallible operations in this crate return `Result<_, Error>`. Variants
//! distinguish structural misuse (bad arguments, division by zero), domain
//! violations (degenerate equations, points outside an operation's domain),
//! and numerical failures (truncation caps, non-converging iterations).

use std::fmt;

/// Error type shared by the algebra, special-function, and equation modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Exact division by a zero scalar, polynomial, or rational function.
    DivisionByZero,
    /// A q-base failed validation (q = 0, |q| = 1, or |q| >= 1 where a base
    /// inside the unit disk is required).
    InvalidBase(String),
    /// The operation needs q as an exact Gaussian rational, but the base was
    /// constructed from a float only.
    ExactBaseRequired,
    /// A structurally invalid argument (zero iteration count, empty input,
    /// out-of-range tolerance, ...).
    InvalidArgument(String),
    /// The inputs are outside the mathematical domain of the operation
    /// (zero/pole at the origin, degenerate equation, violated hypothesis).
    DomainError(String),
    /// A seed passed to an operation that requires an exact solution does not
    /// solve the equation; the string holds the nonzero residual.
    NotASolution(String),
    /// An iterative or truncated computation failed to reach its target
    /// accuracy within its iteration/size budget.
    ConvergenceFailure(String),
    /// Not enough data to carry out the requested analysis (e.g. a radius
    /// range spanning fewer than three decades).
    InsufficientData(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::InvalidBase(msg) => write!(f, "invalid base: {msg}"),
            Error::ExactBaseRequired => {
                write!(f, "operation requires an exact (Gaussian-rational) base q")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::NotASolution(residual) => {
                write!(f, "seed is not an exact solution; residual = {residual}")
            }
            Error::ConvergenceFailure(msg) => write!(f, "convergence failure: {msg}"),
            Error::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
