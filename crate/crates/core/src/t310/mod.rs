//! The T-310 round function, key schedule and wiring checks.

mod bijective;
mod cipher;
pub mod fixtures;
mod lzs;
mod zfunc;

pub use bijective::{check_bijective, check_context, BijectivityMode, BijectivityVerdict, Collision};
pub use cipher::{encrypt, round, CipherState, Key, RoundInputs, SHIFT_MASK, STATE_MASK, T310};
pub use fixtures::Fixture;
pub use lzs::Lzs;
pub use zfunc::ZFunc;
