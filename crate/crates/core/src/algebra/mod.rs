//! Exact arithmetic: multivariate polynomials and rational functions over
//! the rationals, gcds, resultants and linear systems.

pub mod field;
pub mod gcd;
pub mod linsolve;
pub mod parse;
pub mod poly;
pub mod ratfun;
pub mod resultant;
pub mod symbol;

pub use field::ParamField;
pub use gcd::poly_gcd;
pub use linsolve::{linear_solve, nullspace};
pub use parse::{parse_polynomial, parse_rational, ParseError};
pub use poly::{Monomial, Polynomial, Q};
pub use ratfun::RationalFunction;
pub use resultant::{dispersion_set, resultant_k};
pub use symbol::Symbol;
