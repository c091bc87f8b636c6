//! The coefficient system of an FE with an unknown Boolean function, as CNF.
//!
//! The function is written `Z = sum_S Z_S * prod_{k in S} input_k` with 64
//! unknown ANF coefficients `Z00..Z63` (index bit 0 = input `a`). The FE
//! vanishes identically iff, for every monomial in the state bits, the XOR
//! of the coefficient products feeding it is 0.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use crate::boolpoly::{anf, BoolPoly, Placeholder};
use crate::error::{Error, Result};
use crate::symbolic::build_round_anf;
use crate::t310::{Lzs, ZFunc};

/// How an auxiliary variable is defined, in creation order.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Aux {
    And(Vec<i32>),
    Xor(Vec<i32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<i32>>,
    /// One XOR equation per state monomial: the product terms (bit masks
    /// over `Z00..Z63`, 0 meaning the constant 1) whose sum must vanish.
    equations: Vec<Vec<u64>>,
    aux: Vec<(i32, Aux)>,
}

fn xor_clauses(vars: &[i32], parity: bool, out: &mut Vec<Vec<i32>>) {
    // forbid every assignment with the wrong parity
    let n = vars.len();
    for bits in 0u32..(1 << n) {
        if (bits.count_ones() % 2 == 1) != parity {
            out.push(vars.iter().enumerate().map(|(k, &v)| if bits >> k & 1 == 1 { -v } else { v }).collect());
        }
    }
}

impl Cnf {
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn equation_count(&self) -> usize {
        self.equations.len()
    }

    /// Whether the coefficients of `z` solve every equation.
    pub fn solved_by(&self, z: &ZFunc) -> bool {
        let c = anf::mobius(z.truth_table());
        self.equations.iter().all(|eq| eq.iter().filter(|&&m| m & !c == 0).count() % 2 == 0)
    }

    /// Extends the coefficients of `z` to every variable of the CNF.
    pub fn assignment(&self, z: &ZFunc) -> Vec<bool> {
        let c = anf::mobius(z.truth_table());
        let mut val = vec![false; self.num_vars as usize + 1];
        for (i, v) in val.iter_mut().enumerate().skip(1).take(64) {
            *v = c >> (i - 1) & 1 == 1;
        }
        let lit = |val: &[bool], l: i32| val[l.unsigned_abs() as usize] == (l > 0);
        for (v, def) in &self.aux {
            val[*v as usize] = match def {
                Aux::And(xs) => xs.iter().all(|&l| lit(&val, l)),
                Aux::Xor(xs) => xs.iter().fold(false, |a, &l| a ^ lit(&val, l)),
            };
        }
        val
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|cl| cl.iter().any(|&l| assignment[l.unsigned_abs() as usize] == (l > 0)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        writeln!(s, "c variables 1..64 are Z00..Z63, the ANF coefficients of Z").unwrap();
        writeln!(s, "c {} equations, {} auxiliary variables", self.equations.len(), self.num_vars - 64).unwrap();
        writeln!(s, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for cl in &self.clauses {
            for l in cl {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Expands each placeholder into its ANF with unknown coefficients and
/// collects, per state monomial, the products of coefficients.
fn coefficient_system(fe: &BoolPoly, z_inputs: &[[crate::boolpoly::VarId; 6]; 4]) -> Vec<Vec<u64>> {
    let ph_mask: u64 = Placeholder::ALL.iter().map(|p| p.var().bit()).sum();
    let mut rows: BTreeMap<u64, HashMap<u64, bool>> = BTreeMap::new();
    for &term in fe.masks() {
        // expansions: (state monomial, coefficient product)
        let mut parts: Vec<(u64, u64)> = vec![(term & !ph_mask, 0)];
        for ph in Placeholder::ALL {
            if term & ph.var().bit() == 0 {
                continue;
            }
            let inputs = &z_inputs[ph.index()];
            let mut next = Vec::with_capacity(parts.len() * 64);
            for &(m, c) in &parts {
                for s in 0..64usize {
                    let mono = (0..6).filter(|k| s >> k & 1 == 1).fold(m, |acc, k| acc | inputs[k].bit());
                    next.push((mono, c | 1 << s));
                }
            }
            parts = next;
        }
        for (m, c) in parts {
            *rows.entry(m).or_default().entry(c).or_insert(false) ^= true;
        }
    }
    rows.into_values()
        .map(|r| {
            let mut v: Vec<u64> = r.into_iter().filter(|&(_, odd)| odd).map(|(c, _)| c).collect();
            v.sort_unstable();
            v
        })
        .filter(|v| !v.is_empty())
        .collect()
}

/// CNF whose models are the Boolean functions making `P` a one-round
/// invariant for the wiring. Products of coefficients get Tseitin
/// variables; long XORs are cut into chunks of at most four literals.
pub fn export_cnf(p: &BoolPoly, lzs: &Lzs) -> Result<Cnf> {
    if let Some(v) = p.vars().into_iter().find(|v| !v.is_state()) {
        return Err(Error::Invalid(format!("{v} is not a state bit")));
    }
    let round = build_round_anf(lzs, None);
    let fe = p + &round.transform(p);
    if fe.vars().iter().any(|v| v.is_round_input()) {
        return Err(Error::Invalid("the FE depends on F, K or L; no choice of Z removes them".into()));
    }
    let equations = coefficient_system(&fe, round.all_z_inputs());

    let mut num_vars = 64u32;
    let mut clauses = Vec::new();
    let mut aux = Vec::new();
    let mut products: HashMap<u64, i32> = HashMap::new();
    for eq in &equations {
        let mut parity = false;
        let mut lits: Vec<i32> = Vec::new();
        for &c in eq {
            match c.count_ones() {
                0 => parity ^= true,
                1 => lits.push(c.trailing_zeros() as i32 + 1),
                _ => {
                    let v = *products.entry(c).or_insert_with(|| {
                        num_vars += 1;
                        let t = num_vars as i32;
                        let xs: Vec<i32> = (0..64).filter(|s| c >> s & 1 == 1).map(|s| s + 1).collect();
                        for &x in &xs {
                            clauses.push(vec![-t, x]);
                        }
                        let mut long: Vec<i32> = xs.iter().map(|x| -x).collect();
                        long.push(t);
                        clauses.push(long);
                        aux.push((t, Aux::And(xs)));
                        t
                    });
                    lits.push(v);
                }
            }
        }
        // the XOR of `lits` must equal `parity`
        while lits.len() > 4 {
            let chunk: Vec<i32> = lits.drain(..3).collect();
            num_vars += 1;
            let t = num_vars as i32;
            let mut with_t = chunk.clone();
            with_t.push(t);
            xor_clauses(&with_t, false, &mut clauses);
            aux.push((t, Aux::Xor(chunk)));
            lits.push(t);
        }
        if lits.is_empty() {
            if parity {
                clauses.push(Vec::new());
            }
        } else {
            xor_clauses(&lits, parity, &mut clauses);
        }
    }
    Ok(Cnf { num_vars, clauses, equations, aux })
}
