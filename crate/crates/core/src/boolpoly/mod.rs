//! Multivariate polynomials over GF(2) in algebraic normal form.

pub mod anf;
mod parse;
mod poly;
pub mod table;
mod var;

pub(crate) use parse::print_key;
pub use parse::{format_factored, format_monomial, format_poly, parse};
pub use poly::{Assignment, BoolPoly, Monomial, Substitution};
pub use var::{local_index, local_input, Notation, Placeholder, VarId, F, K, L, MAX_TAGGED_ROUNDS, STATE_BITS};
