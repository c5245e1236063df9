//! Exact symbolic substrate: Gaussian-rational scalars, dense polynomials,
//! canonical rational functions, exact linear solving, numeric root
//! finding, and float-to-rational lifting.

pub mod linsolve;
pub mod polynomial;
pub mod rational;
pub mod rational_function;
pub mod rationalize;
pub mod roots;

pub use linsolve::{solve_exact, LinearSolution};
pub use polynomial::Polynomial;
pub use rational::ExactComplexRational;
pub use rational_function::{CompiledRationalFunction, RationalFunction};
pub use rationalize::{rationalize_complex, rationalize_f64};
pub use roots::{roots, RootCluster, DEFAULT_ROOT_TOL};
