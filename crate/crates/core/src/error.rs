use thiserror::Error;

use crate::boolpoly::VarId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no substitution given for variable {0}")]
    MissingSubstitution(VarId),

    #[error("variable {0} is unassigned")]
    Unassigned(VarId),

    #[error("support has {vars} variables, limit is {limit}")]
    SupportTooLarge { vars: usize, limit: usize },

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial is not over the local inputs a..f: {0}")]
    NotLocal(String),

    #[error("LZS needs {expected} {field} entries, found {found}")]
    Arity { field: char, expected: usize, found: usize },

    #[error("LZS entry {field}({index}) = {value} is out of range")]
    OutOfRange { field: char, index: usize, value: usize },

    #[error("invalid hex string: {0}")]
    Hex(String),

    #[error("F stream has {got} bits, {needed} rounds requested")]
    FStreamTooShort { needed: usize, got: usize },

    #[error("variables outside the Boolean function inputs: {}", .0.join(", "))]
    NonLocalVariables(Vec<String>),

    #[error("search needs {needed} unknowns, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },

    #[error("wiring does not close into a factor cycle: {0}")]
    CycleNotClosed(String),

    #[error("cannot chain more than {0} rounds while F, K, L survive")]
    TooManyRounds(usize),

    #[error("infeasible constraints: {0}")]
    Infeasible(String),

    #[error("no candidate found within a budget of {0} assignments")]
    NoCandidate(usize),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("{0}")]
    Invalid(String),
}
