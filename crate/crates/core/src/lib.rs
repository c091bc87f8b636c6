//! Model of the T-310 block cipher and a toolkit for nonlinear polynomial
//! invariants: symbolic round ANFs, Fundamental Equations, invariant
//! verification and search, annihilation conditions on the Boolean function,
//! factor cycles of a wiring and Boolean-function metrics.

pub mod boolpoly;
pub mod error;
pub mod invariant;
pub mod selftest;
pub mod symbolic;
pub mod t310;

pub use error::{Error, Result};
