//! One round as 36 output polynomials, transformation of polynomials through
//! the round, and the Fundamental Equation `FE = P + P(round outputs)`.
//!
//! In symbolic mode the four Boolean-function outputs stay opaque atoms
//! `Z1..Z4`; in concrete mode they are replaced by the function's ANF
//! composed with the instance's six inputs.

use std::fmt;

use serde::Serialize;

use crate::boolpoly::{
    format_factored, local_input, BoolPoly, Notation, Placeholder, Substitution, VarId, F, K, L, MAX_TAGGED_ROUNDS,
};
use crate::error::{Error, Result};
use crate::t310::{Lzs, ZFunc};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Concrete,
    Symbolic,
}

/// The round as substitutions `x_i <- y_i(inputs)`.
#[derive(Clone, Debug)]
pub struct RoundAnf {
    outputs: Vec<BoolPoly>,
    z_inputs: [[VarId; 6]; 4],
    mode: Mode,
    subs: Substitution,
}

fn wire(j: usize) -> VarId {
    if j == 0 {
        K
    } else {
        VarId::state(j)
    }
}

/// Input variables of the four instances: `Z1 = Z(L, x_P1..x_P5)`,
/// `Z2 = Y(x_P7..x_P12)`, `Z3 = X(x_P14..x_P19)`, `Z4 = W(x_P21..x_P26)`.
pub fn z_input_vars(lzs: &Lzs) -> [[VarId; 6]; 4] {
    let tuple = |first: usize| -> [VarId; 6] { std::array::from_fn(|k| VarId::state(lzs.p(first + k))) };
    let mut z1 = [L; 6];
    for k in 1..6 {
        z1[k] = VarId::state(lzs.p(k));
    }
    [z1, tuple(7), tuple(14), tuple(21)]
}

/// Composes a Boolean function's ANF with its input variables.
pub fn instantiate(z: &ZFunc, inputs: &[VarId; 6]) -> BoolPoly {
    let mut s = Substitution::new();
    for (k, &v) in inputs.iter().enumerate() {
        s.set(local_input(k), BoolPoly::var(v));
    }
    s.apply(z.anf()).expect("ANF is over a..f")
}

pub fn build_round_anf(lzs: &Lzs, z: Option<&ZFunc>) -> RoundAnf {
    let z_inputs = z_input_vars(lzs);
    let zp: Vec<BoolPoly> = Placeholder::ALL
        .iter()
        .map(|&ph| match z {
            Some(z) => instantiate(z, &z_inputs[ph.index()]),
            None => BoolPoly::var(ph.var()),
        })
        .collect();
    let x = |j: usize| BoolPoly::var(wire(j));
    let px = |j: usize| x(lzs.p(j));
    let dx = |j: usize| x(lzs.d(j));

    let mut out = vec![BoolPoly::zero(); 36];
    for i in 1..36 {
        if i % 4 != 0 {
            out[i] = x(i); // y_{i+1} = x_i
        }
    }
    let mut t = BoolPoly::var(F);
    out[32] = &t + &dx(9);
    t += &zp[0];
    out[28] = &t + &dx(8);
    t += px(6);
    out[24] = &t + &dx(7);
    t += &zp[1];
    out[20] = &t + &dx(6);
    t += px(13);
    out[16] = &t + &dx(5);
    t += BoolPoly::var(L) + &zp[2];
    out[12] = &t + &dx(4);
    t += px(20);
    out[8] = &t + &dx(3);
    t += &zp[3];
    out[4] = &t + &dx(2);
    t += px(27);
    out[0] = &t + &dx(1);

    let mut subs = Substitution::identity();
    for (i, p) in out.iter().enumerate() {
        subs.set(VarId::state(i + 1), p.clone());
    }
    RoundAnf { outputs: out, z_inputs, mode: if z.is_some() { Mode::Concrete } else { Mode::Symbolic }, subs }
}

impl RoundAnf {
    /// ANF of output bit `y_i`, `i` in `1..=36`.
    pub fn output(&self, i: usize) -> &BoolPoly {
        &self.outputs[i - 1]
    }

    pub fn outputs(&self) -> &[BoolPoly] {
        &self.outputs
    }

    pub fn z_inputs(&self, ph: Placeholder) -> &[VarId; 6] {
        &self.z_inputs[ph.index()]
    }

    pub fn all_z_inputs(&self) -> &[[VarId; 6]; 4] {
        &self.z_inputs
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `P(round outputs)`: every state variable replaced by its output ANF.
    /// Other variables (F, K, L, placeholders, tags) are left as they are.
    pub fn transform(&self, p: &BoolPoly) -> BoolPoly {
        self.subs.apply(p).expect("identity substitution covers every variable")
    }

    /// Polynomial after `rounds` rounds. Round inputs introduced by later
    /// rounds are renamed to tagged slots so each round keeps its own
    /// `F`, `K`, `L`: after the call, plain `F, K, L` belong to the first
    /// round and `F[s], K[s], L[s]` to round `rounds - 1 - s`.
    pub fn compose(&self, p: &BoolPoly, rounds: usize) -> Result<BoolPoly> {
        let mut q = p.clone();
        for step in 0..rounds {
            if step > 0 && (q.mentions(F) || q.mentions(K) || q.mentions(L)) {
                let tag = step - 1;
                if tag >= MAX_TAGGED_ROUNDS {
                    return Err(Error::TooManyRounds(MAX_TAGGED_ROUNDS + 1));
                }
                q = q.rename(|v| if v.is_round_input() { VarId::tagged(v, tag) } else { v });
            }
            q = self.transform(&q);
        }
        Ok(q)
    }
}

/// A Fundamental Equation together with the round inputs that survive in it.
#[derive(Clone, Debug)]
pub struct FeReport {
    pub fe: BoolPoly,
    pub survivors: Vec<VarId>,
    pub mode: Mode,
    pub z_inputs: [[VarId; 6]; 4],
}

/// `FE = p + transform(p)`.
pub fn fundamental_equation(p: &BoolPoly, lzs: &Lzs, z: Option<&ZFunc>) -> FeReport {
    fe_for_round(p, &build_round_anf(lzs, z))
}

pub fn fe_for_round(p: &BoolPoly, round: &RoundAnf) -> FeReport {
    let fe = p + &round.transform(p);
    let survivors = [F, K, L].into_iter().filter(|&v| fe.mentions(v)).collect();
    FeReport { fe, survivors, mode: round.mode, z_inputs: round.z_inputs }
}

impl FeReport {
    pub fn is_zero(&self) -> bool {
        self.fe.is_zero()
    }

    /// Re-expresses the FE over one instance's local input names `a..f`,
    /// printing that instance's output as `Z`.
    pub fn in_local_inputs(&self, which: Placeholder) -> Result<BoolPoly> {
        local_rewrite(&self.fe, &self.z_inputs[which.index()], which)
    }

    pub fn survivor_names(&self) -> String {
        self.survivors.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Renames the inputs of one Boolean-function instance to `a..f` and the
/// instance output to `Z1`. Fails, listing the offenders, if `p` mentions
/// anything else. A variable wired to several inputs takes the first one.
pub fn local_rewrite(p: &BoolPoly, inputs: &[VarId; 6], which: Placeholder) -> Result<BoolPoly> {
    let mut offenders = Vec::new();
    for v in p.vars() {
        if v == which.var() || inputs.contains(&v) {
            continue;
        }
        offenders.push(v.name(Notation::Indexed));
    }
    if !offenders.is_empty() {
        return Err(Error::NonLocalVariables(offenders));
    }
    Ok(p.rename(|v| {
        if v == which.var() {
            Placeholder::Z1.var()
        } else if let Some(k) = inputs.iter().position(|&w| w == v) {
            local_input(k)
        } else {
            v
        }
    }))
}

impl fmt::Display for FeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FE = {}", format_factored(&self.fe, Notation::Indexed))?;
        if self.survivors.is_empty() {
            write!(f, "  (no F, K, L)")
        } else {
            write!(f, "  (survivors: {})", self.survivor_names())
        }
    }
}
