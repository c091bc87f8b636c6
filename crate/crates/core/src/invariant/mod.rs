//! Invariants of the round: exact and empirical verification, the search for
//! every invariant of bounded degree, factor cycles read off a wiring, and
//! the conditions a Boolean function must meet to keep them.

mod annihilation;
mod cnf;
mod cycle;
mod search;
mod synth;
mod verify;

pub use annihilation::{
    check_annihilation, check_theorem3, solve_z, z_metrics, AnnihilationCondition, AnnihilationVerdict,
    Theorem3Failure, Theorem3Verdict, ZMetrics, ZSolution,
};
pub use cnf::{export_cnf, Cnf};
pub use cycle::{derive_cycle_factors, Edge, EdgeKind, FactorCycle};
pub use search::{search_invariants, InvariantSearchSpec, InvariantSpace, SEARCH_BUDGET};
pub use synth::{synthesize_wiring, Constraint, Slot, SynthRequest};
pub use verify::{empirical_check, verify_chain, verify_invariant, ChainVerdict, EmpiricalReport, Verdict, Witness};
