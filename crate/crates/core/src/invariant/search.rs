use std::collections::HashMap;

use rayon::prelude::*;

use crate::boolpoly::{BoolPoly, Monomial, VarId};
use crate::error::{Error, Result};
use crate::symbolic::build_round_anf;
use crate::t310::{Lzs, ZFunc};

/// Largest number of unknown coefficients a search may use.
pub const SEARCH_BUDGET: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSearchSpec {
    pub variables: Vec<VarId>,
    pub max_degree: u32,
    pub rounds: usize,
}

impl InvariantSearchSpec {
    pub fn new(variables: Vec<VarId>, max_degree: u32) -> Self {
        InvariantSearchSpec { variables, max_degree, rounds: 1 }
    }

    pub fn all_state(max_degree: u32) -> Self {
        Self::new((1..=36).map(VarId::state).collect(), max_degree)
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = rounds;
        self
    }

    /// Number of non-constant monomials of degree at most `max_degree`.
    pub fn unknowns(&self) -> usize {
        let n = self.variables.len();
        let mut total = 0usize;
        let mut binom = 1usize; // C(n, d)
        for d in 1..=(self.max_degree as usize).min(n) {
            binom = binom.saturating_mul(n + 1 - d) / d;
            total = total.saturating_add(binom);
        }
        total
    }

    fn monomials(&self) -> Vec<Monomial> {
        let mut vars = self.variables.clone();
        vars.sort();
        vars.dedup();
        let mut out = Vec::new();
        fn rec(vars: &[VarId], start: usize, left: u32, cur: u64, out: &mut Vec<Monomial>) {
            for i in start..vars.len() {
                let m = cur | vars[i].bit();
                out.push(Monomial(m));
                if left > 1 {
                    rec(vars, i + 1, left - 1, m, out);
                }
            }
        }
        if self.max_degree > 0 {
            rec(&vars, 0, self.max_degree, 0, &mut out);
        }
        out.sort_by_key(|m| (m.degree(), m.0));
        out
    }
}

/// A linear space of invariants, held in reduced row echelon form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantSpace {
    basis: Vec<BoolPoly>,
}

fn lead(p: &BoolPoly) -> u64 {
    *p.masks().last().expect("nonzero")
}

impl InvariantSpace {
    fn from_vectors(vectors: Vec<BoolPoly>) -> Self {
        let mut rows: Vec<BoolPoly> = Vec::new();
        for v in vectors {
            let r = reduce(&rows, v);
            if !r.is_zero() {
                rows.push(r);
            }
        }
        // back substitution: no row mentions another row's leading term
        rows.sort_by_key(lead);
        for i in 0..rows.len() {
            let li = Monomial(lead(&rows[i]));
            for j in 0..rows.len() {
                if i != j && rows[j].contains_term(li) {
                    rows[j] = &rows[j] + &rows[i];
                }
            }
        }
        InvariantSpace { basis: rows }
    }

    pub fn basis(&self) -> &[BoolPoly] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Whether `p` lies in the space, ignoring its constant term.
    pub fn contains(&self, p: &BoolPoly) -> bool {
        let q = p + &BoolPoly::constant(p.contains_term(Monomial::ONE));
        reduce(&self.basis, q).is_zero()
    }
}

fn reduce(rows: &[BoolPoly], mut v: BoolPoly) -> BoolPoly {
    let mut changed = true;
    while changed && !v.is_zero() {
        changed = false;
        for r in rows {
            if v.contains_term(Monomial(lead(r))) {
                v = &v + r;
                changed = true;
            }
        }
    }
    v
}

/// Every polynomial `P` over the given variables and degree with
/// `P = P(round outputs)` (or its chained version) for the concrete
/// function. The constant 1, always invariant, is left out.
pub fn search_invariants(spec: &InvariantSearchSpec, lzs: &Lzs, z: &ZFunc) -> Result<InvariantSpace> {
    let needed = spec.unknowns();
    if needed > SEARCH_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: SEARCH_BUDGET });
    }
    if let Some(v) = spec.variables.iter().find(|v| !v.is_state()) {
        return Err(Error::Invalid(format!("search variable {v} is not a state bit")));
    }
    let monomials = spec.monomials();
    let round = build_round_anf(lzs, Some(z));
    let columns: Vec<BoolPoly> = monomials
        .par_iter()
        .map(|&m| {
            let p = BoolPoly::monomial(m);
            round.compose(&p, spec.rounds).map(|q| &p + &q)
        })
        .collect::<Result<_>>()?;

    // Incremental elimination; each pivot row remembers which columns it sums.
    let words = monomials.len().div_ceil(64);
    let mut pivots: HashMap<u64, (BoolPoly, Vec<u64>)> = HashMap::new();
    let mut kernel = Vec::new();
    for (i, col) in columns.into_iter().enumerate() {
        let mut v = col;
        let mut combo = vec![0u64; words];
        combo[i / 64] |= 1 << (i % 64);
        while let Some(&l) = v.masks().last() {
            match pivots.get(&l) {
                Some((row, rc)) => {
                    v = &v + row;
                    combo.iter_mut().zip(rc).for_each(|(a, b)| *a ^= b);
                }
                None => break,
            }
        }
        if v.is_zero() {
            let p = BoolPoly::from_monomials(
                (0..monomials.len()).filter(|&k| combo[k / 64] >> (k % 64) & 1 == 1).map(|k| monomials[k]),
            );
            kernel.push(p);
        } else {
            pivots.insert(lead(&v), (v, combo));
        }
    }
    Ok(InvariantSpace::from_vectors(kernel))
}
