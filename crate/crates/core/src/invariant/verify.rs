use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boolpoly::{BoolPoly, VarId, F, K, L};
use crate::error::{Error, Result};
use crate::symbolic::build_round_anf;
use crate::t310::{CipherState, Key, Lzs, RoundInputs, ZFunc, STATE_MASK, T310};

/// A concrete input on which a polynomial changes its value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub state: CipherState,
    /// Round inputs in the order the rounds are applied.
    pub inputs: Vec<RoundInputs>,
    pub before: bool,
    pub after: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Proven,
    Refuted(Witness),
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Refuted(w) => Some(w),
            Verdict::Proven => None,
        }
    }
}

fn check_state_poly(p: &BoolPoly) -> Result<()> {
    match p.vars().into_iter().find(|v| !v.is_state()) {
        Some(v) => Err(Error::Invalid(format!("invariant mentions {v}, expected state bits only"))),
        None => Ok(()),
    }
}

/// Values of every variable that make `diff` evaluate to 1: the variables of
/// one lowest-degree term set to 1, everything else 0. No other term can be
/// a subset of that term, so exactly one term survives.
fn root_mask(diff: &BoolPoly) -> u64 {
    diff.masks().iter().copied().min_by_key(|m| (m.count_ones(), *m)).expect("nonzero polynomial")
}

/// Splits an assignment into the initial state and the round inputs of
/// `rounds` chained rounds, following the tagging used by `compose`.
fn split_assignment(mask: u64, rounds: usize) -> (CipherState, Vec<RoundInputs>) {
    let state = CipherState::new(mask & STATE_MASK);
    let bit = |v: VarId| mask & v.bit() != 0;
    let inputs = (0..rounds)
        .map(|j| {
            if j == 0 {
                RoundInputs::new(bit(F), bit(K), bit(L))
            } else {
                let t = rounds - 1 - j;
                RoundInputs::new(bit(VarId::tagged(F, t)), bit(VarId::tagged(K, t)), bit(VarId::tagged(L, t)))
            }
        })
        .collect();
    (state, inputs)
}

fn run(cipher: &T310, state: CipherState, inputs: &[RoundInputs]) -> CipherState {
    inputs.iter().fold(state, |s, &r| cipher.round(s, r))
}

/// Decides whether `p` keeps its value through `rounds` rounds for every
/// state, key and `F`: the composed polynomial must equal `p` exactly.
pub fn verify_invariant(p: &BoolPoly, lzs: &Lzs, z: &ZFunc, rounds: usize) -> Result<Verdict> {
    check_state_poly(p)?;
    let round = build_round_anf(lzs, Some(z));
    let diff = p + &round.compose(p, rounds)?;
    if diff.is_zero() {
        return Ok(Verdict::Proven);
    }
    let (state, inputs) = split_assignment(root_mask(&diff), rounds);
    let end = run(&T310::new(lzs, z), state, &inputs);
    let w = Witness { state, inputs, before: p.eval_mask(state.bits()), after: p.eval_mask(end.bits()) };
    debug_assert_ne!(w.before, w.after);
    Ok(Verdict::Refuted(w))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ChainVerdict {
    Proven,
    /// `transform(chain[link + 1]) != chain[link]`; the witness shows
    /// `chain[link]` on the state and `chain[link + 1]` one round later.
    Refuted {
        link: usize,
        witness: Witness,
    },
}

impl ChainVerdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, ChainVerdict::Proven)
    }
}

/// Checks that one round maps each element of the chain onto the previous
/// one, cyclically, so that every element survives `chain.len()` rounds.
pub fn verify_chain(chain: &[BoolPoly], lzs: &Lzs, z: &ZFunc) -> Result<ChainVerdict> {
    if chain.is_empty() {
        return Err(Error::Invalid("empty chain".into()));
    }
    chain.iter().try_for_each(check_state_poly)?;
    let round = build_round_anf(lzs, Some(z));
    let k = chain.len();
    for i in 0..k {
        let next = &chain[(i + 1) % k];
        let diff = &chain[i] + &round.transform(next);
        if diff.is_zero() {
            continue;
        }
        let (state, inputs) = split_assignment(root_mask(&diff), 1);
        let end = run(&T310::new(lzs, z), state, &inputs);
        let witness =
            Witness { state, inputs, before: chain[i].eval_mask(state.bits()), after: next.eval_mask(end.bits()) };
        debug_assert_ne!(witness.before, witness.after);
        return Ok(ChainVerdict::Refuted { link: i, witness });
    }
    Ok(ChainVerdict::Proven)
}

/// One run in which the polynomial changed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub trial: u64,
    pub round: usize,
    pub state: CipherState,
    pub key: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalReport {
    pub trials: u64,
    pub rounds: usize,
    pub violations: u64,
    pub first: Option<Violation>,
}

/// Runs `trials` encryptions of `rounds` rounds from random states with a
/// random 240-bit key and random `F` bits, counting runs where `p` ever
/// differs from its initial value.
pub fn empirical_check(
    p: &BoolPoly,
    lzs: &Lzs,
    z: &ZFunc,
    trials: u64,
    rounds: usize,
    seed: u64,
) -> Result<EmpiricalReport> {
    check_state_poly(p)?;
    let cipher = T310::new(lzs, z);
    let key_mask = (1u128 << 120) - 1;
    let hits: Vec<Violation> = (0..trials)
        .into_par_iter()
        .filter_map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let start = CipherState::new(rng.gen());
            let key = Key::new(rng.gen::<u128>() & key_mask, rng.gen::<u128>() & key_mask);
            let v0 = p.eval_mask(start.bits());
            let mut s = start;
            for m in 0..rounds {
                let (k, l) = key.schedule(m);
                s = cipher.round(s, RoundInputs::new(rng.gen(), k, l));
                if p.eval_mask(s.bits()) != v0 {
                    return Some(Violation { trial, round: m + 1, state: start, key: key.to_hex() });
                }
            }
            None
        })
        .collect();
    Ok(EmpiricalReport { trials, rounds, violations: hits.len() as u64, first: hits.into_iter().next() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::parse;
    use crate::t310::Fixture;

    fn fx(name: &str) -> Fixture {
        Fixture::get(name).unwrap()
    }

    fn check_witness(w: &Witness, p: &BoolPoly, f: &Fixture) {
        let end = run(&T310::new(&f.lzs, &f.z), w.state, &w.inputs);
        assert_eq!(p.eval_mask(w.state.bits()), w.before);
        assert_eq!(p.eval_mask(end.bits()), w.after);
        assert_ne!(w.before, w.after);
    }

    #[test]
    fn fixture_invariants_hold_and_non_invariants_fail() {
        for f in Fixture::all() {
            for e in &f.invariants {
                let p = f.expand(e).unwrap();
                assert!(verify_invariant(&p, &f.lzs, &f.z, 1).unwrap().is_proven(), "{} {e}", f.name);
            }
            for e in &f.non_invariants {
                let p = f.expand(e).unwrap();
                match verify_invariant(&p, &f.lzs, &f.z, 1).unwrap() {
                    Verdict::Refuted(w) => check_witness(&w, &p, &f),
                    Verdict::Proven => panic!("{} {e} should fail", f.name),
                }
            }
        }
    }

    #[test]
    fn constants_are_invariant() {
        let f = fx("443");
        assert!(verify_invariant(&BoolPoly::one(), &f.lzs, &f.z, 1).unwrap().is_proven());
        assert!(verify_invariant(&BoolPoly::zero(), &f.lzs, &f.z, 3).unwrap().is_proven());
    }

    #[test]
    fn multi_round_witness_replays() {
        let f = fx("551");
        let p = parse("a").unwrap();
        for rounds in 1..=4 {
            match verify_invariant(&p, &f.lzs, &f.z, rounds).unwrap() {
                Verdict::Refuted(w) => {
                    assert_eq!(w.inputs.len(), rounds);
                    check_witness(&w, &p, &f);
                }
                Verdict::Proven => panic!("a is not invariant"),
            }
        }
        assert!(verify_invariant(&f.expand("AC+BD").unwrap(), &f.lzs, &f.z, 2).unwrap().is_proven());
    }

    #[test]
    fn state_polynomials_only() {
        let f = fx("551");
        assert!(verify_invariant(&parse("a+F").unwrap(), &f.lzs, &f.z, 1).is_err());
    }

    #[test]
    fn linear_chain_needs_projection() {
        let f = fx("551");
        let chain: Vec<_> = "DCBA".chars().map(|c| f.factor(c).unwrap().clone()).collect();
        let proj = ZFunc::parse("f").unwrap();
        assert!(verify_chain(&chain, &f.lzs, &proj).unwrap().is_proven());
        match verify_chain(&chain, &f.lzs, &f.z).unwrap() {
            ChainVerdict::Refuted { link, witness } => {
                assert_eq!(link, 3);
                let c = T310::new(&f.lzs, &f.z);
                assert_eq!(chain[3].eval_mask(witness.state.bits()), witness.before);
                assert_eq!(chain[0].eval_mask(c.round(witness.state, witness.inputs[0]).bits()), witness.after);
                assert_ne!(witness.before, witness.after);
            }
            v => panic!("{v:?}"),
        }
        let pair = vec![f.expand("AC").unwrap(), f.expand("BD").unwrap()];
        assert!(verify_chain(&pair, &f.lzs, &f.z).unwrap().is_proven());
        assert!(verify_chain(&[], &f.lzs, &f.z).is_err());
    }

    #[test]
    fn empirical_agrees_with_exact() {
        let f = fx("558");
        let good = empirical_check(&f.expand("ABCD").unwrap(), &f.lzs, &f.z, 300, 32, 1).unwrap();
        assert_eq!(good.violations, 0);
        let bad = empirical_check(&f.expand("AC+BD").unwrap(), &f.lzs, &f.z, 300, 32, 1).unwrap();
        assert!(bad.violations > 0);
        let v = bad.first.unwrap();
        assert!(v.round >= 1 && v.round <= 32);
    }
}
