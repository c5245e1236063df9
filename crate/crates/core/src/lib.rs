//! Exact and numeric toolkit for first-order q-difference Riccati
//! equations, their linearizations, and q-gamma closed forms.

pub mod algebra;
pub mod linear;
pub mod qspecial;
pub mod riccati;
pub mod valuedist;
mod error;
mod value;

pub use error::Error;
pub use value::EvalValue;
