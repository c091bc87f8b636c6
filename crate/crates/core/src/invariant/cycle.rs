use std::fmt;

use crate::boolpoly::{format_poly, BoolPoly, Notation, Placeholder, VarId};
use crate::error::{Error, Result};
use crate::symbolic::{build_round_anf, RoundAnf};
use crate::t310::Lzs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// `transform(to) = from`.
    TrivialShift,
    /// `transform(to) = from + placeholder + offset`, with `offset` linear in
    /// the inputs of that Boolean-function instance.
    ZPerturbed { placeholder: Placeholder, offset: BoolPoly },
}

/// Edge `from -> to` between factor indices: the factor `from` read on the
/// round inputs is `to` read on the round outputs (up to a perturbation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// Affine factors `x_u + x_v` visited by the shift wiring, in the order one
/// round carries them: `transform(factors[i]) = factors[i + 1]`, and the
/// last factor returns to the first through a Boolean-function output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCycle {
    pub factors: Vec<BoolPoly>,
    pub edges: Vec<Edge>,
}

impl FactorCycle {
    pub fn perturbed_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| matches!(e.kind, EdgeKind::ZPerturbed { .. }))
    }

    /// Product of all factors.
    pub fn product(&self) -> BoolPoly {
        self.factors.iter().cloned().product()
    }

    /// Writes the cycle with factor names starting at `first`.
    pub fn describe(&self, first: char) -> Vec<String> {
        let name = |i: usize| ((first as u8) + i as u8) as char;
        let mut lines: Vec<String> = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| format!("{} = {}", name(i), format_poly(f, Notation::Letters)))
            .collect();
        for e in &self.edges {
            let kind = match &e.kind {
                EdgeKind::TrivialShift => "shift".to_string(),
                EdgeKind::ZPerturbed { placeholder, offset } => {
                    format!("perturbed by {} + {}", placeholder.letter(), format_poly(offset, Notation::Letters))
                }
            };
            lines.push(format!("{} -> {}: {}", name(e.from), name(e.to), kind));
        }
        lines
    }
}

impl fmt::Display for FactorCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe('A').join("\n"))
    }
}

fn pair_poly(u: usize, v: usize) -> BoolPoly {
    BoolPoly::var(VarId::state(u)) + BoolPoly::var(VarId::state(v))
}

const FRESH: [usize; 9] = [1, 5, 9, 13, 17, 21, 25, 29, 33];

/// If `image + target` is `Zk + offset` with `offset` linear over the inputs
/// of instance `k`, returns them.
fn perturbation(round: &RoundAnf, image: &BoolPoly, target: &BoolPoly) -> Option<(Placeholder, BoolPoly)> {
    let diff = image + target;
    let vars = diff.vars();
    let phs: Vec<Placeholder> = vars.iter().filter_map(|v| v.placeholder()).collect();
    if phs.len() != 1 || !diff.is_affine() {
        return None;
    }
    let ph = phs[0];
    let offset = &diff + &BoolPoly::var(ph.var());
    let inputs = round.z_inputs(ph);
    offset.vars().iter().all(|v| v.is_state() && inputs.contains(v)).then_some((ph, offset))
}

/// Follows the shift wiring backwards from the factor `x_i + x_j` of two
/// fresh outputs until it closes into a cycle.
pub fn derive_cycle_factors(lzs: &Lzs, seed: (usize, usize)) -> Result<FactorCycle> {
    let (i, j) = seed;
    if i == j || !FRESH.contains(&i) || !FRESH.contains(&j) {
        return Err(Error::Invalid(format!("seed ({i},{j}) must be two distinct outputs 1, 5, ..., 33")));
    }
    let round = build_round_anf(lzs, None);
    // backwards order: each entry maps onto the previous one
    let mut back: Vec<(usize, usize)> = Vec::new();
    let mut kinds: Vec<EdgeKind> = Vec::new();
    let (mut u, mut v) = (i.max(j), i.min(j));
    loop {
        back.push((u, v));
        while u % 4 != 0 {
            u += 1;
            v += 1;
            back.push((u, v));
            kinds.push(EdgeKind::TrivialShift);
        }
        let target = pair_poly(u, v);
        let mut found = None;
        'search: for a in 0..9 {
            for b in 0..a {
                let (p, q) = (FRESH[a], FRESH[b]);
                if let Some(pert) = perturbation(&round, &round.transform(&pair_poly(p, q)), &target) {
                    found = Some(((p, q), pert));
                    break 'search;
                }
            }
        }
        let ((p, q), (placeholder, offset)) = found.ok_or_else(|| {
            Error::CycleNotClosed(format!("no fresh pair feeds x{u}+x{v} through a single Boolean function"))
        })?;
        kinds.push(EdgeKind::ZPerturbed { placeholder, offset });
        if (p, q) == (i.max(j), i.min(j)) {
            break;
        }
        if back.contains(&(p, q)) {
            return Err(Error::CycleNotClosed(format!("x{p}+x{q} is reached twice without returning to the seed")));
        }
        (u, v) = (p, q);
    }
    // kinds[k] says transform(back[k + 1]) = back[k], with back[n] = back[0]
    let n = back.len();
    let factors: Vec<BoolPoly> = back.iter().rev().map(|&(u, v)| pair_poly(u, v)).collect();
    let mut edges: Vec<Edge> = kinds
        .into_iter()
        .enumerate()
        .map(|(k, kind)| Edge { from: n - 1 - k, to: (2 * n - 2 - k) % n, kind })
        .collect();
    edges.sort_by_key(|e| e.from);
    Ok(FactorCycle { factors, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::parse;
    use crate::t310::Fixture;

    fn factors(f: &Fixture, names: &str) -> Vec<BoolPoly> {
        names.chars().map(|c| f.factor(c).unwrap().clone()).collect()
    }

    #[test]
    fn cycle_551() {
        let f = Fixture::get("551").unwrap();
        let c = derive_cycle_factors(&f.lzs, (29, 21)).unwrap();
        assert_eq!(c.factors, factors(&f, "ABCD"));
        assert_eq!(c, derive_cycle_factors(&f.lzs, (21, 29)).unwrap());
        let pert: Vec<_> = c.perturbed_edges().collect();
        assert_eq!(pert.len(), 1);
        assert_eq!((pert[0].from, pert[0].to), (0, 3));
        assert_eq!(pert[0].kind, EdgeKind::ZPerturbed { placeholder: Placeholder::Z2, offset: parse("m").unwrap() });
        // every edge obeys its own equation
        let r = build_round_anf(&f.lzs, None);
        for e in &c.edges {
            let extra = match &e.kind {
                EdgeKind::TrivialShift => BoolPoly::zero(),
                EdgeKind::ZPerturbed { placeholder, offset } => offset + &BoolPoly::var(placeholder.var()),
            };
            assert_eq!(r.transform(&c.factors[e.to]), &c.factors[e.from] + &extra);
        }
        assert_eq!(c.product(), f.expand("ABCD").unwrap());
        assert!(c.to_string().contains("A -> D: perturbed by Y + m"));
    }

    #[test]
    fn two_cycles_443() {
        let f = Fixture::get("443").unwrap();
        assert_eq!(derive_cycle_factors(&f.lzs, (25, 17)).unwrap().factors, factors(&f, "ABCD"));
        let second = derive_cycle_factors(&f.lzs, (13, 5)).unwrap();
        assert_eq!(second.factors, factors(&f, "EFGH"));
        assert_eq!(second.perturbed_edges().count(), 1);
    }

    #[test]
    fn one_long_cycle_444() {
        let f = Fixture::get("444").unwrap();
        let c = derive_cycle_factors(&f.lzs, (13, 5)).unwrap();
        assert_eq!(c.factors, factors(&f, "ABCDEFGH"));
        let phs: Vec<_> = c
            .perturbed_edges()
            .map(|e| match &e.kind {
                EdgeKind::ZPerturbed { placeholder, .. } => *placeholder,
                EdgeKind::TrivialShift => unreachable!(),
            })
            .collect();
        // A -> H goes through W, E -> D through Y
        assert_eq!(phs, [Placeholder::Z4, Placeholder::Z2]);
    }

    #[test]
    fn bad_seeds() {
        let f = Fixture::get("551").unwrap();
        assert!(matches!(derive_cycle_factors(&f.lzs, (29, 29)), Err(Error::Invalid(_))));
        assert!(matches!(derive_cycle_factors(&f.lzs, (30, 21)), Err(Error::Invalid(_))));
        assert!(matches!(derive_cycle_factors(&f.lzs, (33, 1)), Err(Error::CycleNotClosed(_))));
    }
}
