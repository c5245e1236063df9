//! Command-line interface for the q-difference Riccati toolkit.
//!
//! The binary target is a thin wrapper around [`cli::run`]; everything else
//! lives here so that the expression grammar, configuration resolution, and
//! output encodings are testable as a library.
//!
//! ```text
//! qriccati verify-riccati --q 1/2 --A "z^3+6*z^2+7*z" --f "2*z+4"
//! {"residual":"0","is_solution":true}
//! ```

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod output;

pub use cli::run;
