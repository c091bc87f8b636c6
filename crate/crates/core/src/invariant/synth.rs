use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boolpoly::BoolPoly;
use crate::error::{Error, Result};
use crate::invariant::annihilation::{check_annihilation, solve_z, AnnihilationCondition};
use crate::invariant::search::{search_invariants, InvariantSearchSpec};
use crate::invariant::verify::verify_invariant;
use crate::t310::{check_bijective, BijectivityMode, BijectivityVerdict, Lzs, ZFunc, T310};

/// One wiring entry: `D(1..=9)` or `P(1..=27)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    D(usize),
    P(usize),
}

impl Slot {
    /// Position in the fill order `D1..D9, P1..P27`.
    fn index(self) -> usize {
        match self {
            Slot::D(j) => j - 1,
            Slot::P(j) => 9 + j - 1,
        }
    }

    fn from_index(i: usize) -> Slot {
        if i < 9 {
            Slot::D(i + 1)
        } else {
            Slot::P(i - 8)
        }
    }

    fn range(self) -> std::ops::RangeInclusive<u8> {
        match self {
            Slot::D(_) => 0..=36,
            Slot::P(_) => 1..=36,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::D(j) => write!(f, "D({j})"),
            Slot::P(j) => write!(f, "P({j})"),
        }
    }
}

impl FromStr for Slot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slot> {
        let s = s.trim();
        let bad = || Error::Parse { pos: 0, msg: format!("expected D(j) or P(j), got {s:?}") };
        let (kind, rest) = s.split_at(s.chars().next().map(char::len_utf8).ok_or_else(bad)?);
        let num = rest.trim_start_matches('(').trim_end_matches(')');
        let j: usize = num.parse().map_err(|_| bad())?;
        let slot = match kind {
            "D" | "d" if (1..=9).contains(&j) => Slot::D(j),
            "P" | "p" if (1..=27).contains(&j) => Slot::P(j),
            _ => return Err(bad()),
        };
        Ok(slot)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Value(Slot, u8),
    Same(Slot, Slot),
}

impl FromStr for Constraint {
    type Err = Error;

    /// `D(8)=P(6)` or `D(6)=32`.
    fn from_str(s: &str) -> Result<Constraint> {
        let (l, r) =
            s.split_once('=').ok_or_else(|| Error::Parse { pos: 0, msg: format!("constraint {s:?} has no '='") })?;
        let lhs: Slot = l.parse()?;
        match r.trim().parse::<u8>() {
            Ok(v) => Ok(Constraint::Value(lhs, v)),
            Err(_) => Ok(Constraint::Same(lhs, r.parse()?)),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Value(s, v) => write!(f, "{s}={v}"),
            Constraint::Same(a, b) => write!(f, "{a}={b}"),
        }
    }
}

/// What a synthesized wiring must satisfy.
#[derive(Clone, Debug)]
pub struct SynthRequest {
    pub constraints: Vec<Constraint>,
    /// Values tried first for each slot.
    pub base: Option<Lzs>,
    /// Boolean function used for every check. Without one, the sample
    /// solution of `annihilation` is used.
    pub z: Option<ZFunc>,
    pub annihilation: Vec<AnnihilationCondition>,
    /// Polynomials that must be one-round invariants.
    pub required: Vec<BoolPoly>,
    /// Searches that must come back empty.
    pub forbidden: Vec<InvariantSearchSpec>,
    pub seed: u64,
    /// Sampled contexts for the bijectivity check.
    pub bijectivity_contexts: u64,
    /// Complete wirings to examine before giving up.
    pub budget: usize,
    /// Stop after this many accepted wirings.
    pub want: usize,
}

impl SynthRequest {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        SynthRequest {
            constraints,
            base: None,
            z: None,
            annihilation: Vec::new(),
            required: Vec::new(),
            forbidden: Vec::new(),
            seed: 0,
            bijectivity_contexts: 256,
            budget: 10_000,
            want: 1,
        }
    }
}

const SLOTS: usize = 36;

/// Union-find over slots with a fixed value per class.
fn resolve(constraints: &[Constraint]) -> Result<(Vec<usize>, Vec<Option<u8>>)> {
    let mut parent: Vec<usize> = (0..SLOTS).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for c in constraints {
        if let Constraint::Same(a, b) = *c {
            let (ra, rb) = (find(&mut parent, a.index()), find(&mut parent, b.index()));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut fixed: Vec<Option<u8>> = vec![None; SLOTS];
    for c in constraints {
        if let Constraint::Value(s, v) = *c {
            if !s.range().contains(&v) {
                return Err(Error::Infeasible(format!("{s}={v} is out of range")));
            }
            let r = find(&mut parent, s.index());
            match fixed[r] {
                Some(w) if w != v => return Err(Error::Infeasible(format!("{s} cannot be both {w} and {v}"))),
                _ => fixed[r] = Some(v),
            }
        }
    }
    let roots: Vec<usize> = (0..SLOTS).map(|i| find(&mut parent, i)).collect();
    for (i, &r) in roots.iter().enumerate() {
        if let Some(v) = fixed[r] {
            let s = Slot::from_index(i);
            if !s.range().contains(&v) {
                return Err(Error::Infeasible(format!("{s} would be {v}, out of range")));
            }
        }
    }
    Ok((roots, fixed))
}

/// Depth-first fill of the 36 wiring slots, lowest index first. Each slot
/// tries the base value first, then the rest of its range in a seeded
/// random order. Every complete wiring is checked for bijectivity (sampled),
/// the required invariants and the forbidden searches.
pub fn synthesize_wiring(req: &SynthRequest) -> Result<Vec<Lzs>> {
    let (roots, fixed) = resolve(&req.constraints)?;
    let z = match &req.z {
        Some(z) => z.clone(),
        None => solve_z(&req.annihilation)?.sample,
    };
    for c in &req.annihilation {
        if !check_annihilation(&z, c).holds() {
            return Err(Error::Infeasible(format!("the Boolean function does not satisfy {c}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let choices: Vec<Vec<u8>> = (0..SLOTS)
        .map(|i| {
            let slot = Slot::from_index(i);
            // values every slot tied to this one can take
            let tied = |v: u8| (0..SLOTS).all(|k| roots[k] != roots[i] || Slot::from_index(k).range().contains(&v));
            let mut vals: Vec<u8> = slot.range().filter(|&v| tied(v)).collect();
            vals.shuffle(&mut rng);
            if let Some(b) = &req.base {
                let bv = match slot {
                    Slot::D(j) => b.d(j),
                    Slot::P(j) => b.p(j),
                } as u8;
                if let Some(pos) = vals.iter().position(|&v| v == bv) {
                    vals.remove(pos);
                    vals.insert(0, bv);
                }
            }
            vals
        })
        .collect();

    let mut state = Search { req, z: &z, roots: &roots, fixed: &fixed, choices: &choices, tried: 0, found: Vec::new() };
    let mut values = [0u8; SLOTS];
    state.fill(0, &mut values)?;
    if state.found.is_empty() {
        return Err(Error::NoCandidate(state.tried));
    }
    Ok(state.found)
}

struct Search<'a> {
    req: &'a SynthRequest,
    z: &'a ZFunc,
    roots: &'a [usize],
    fixed: &'a [Option<u8>],
    choices: &'a [Vec<u8>],
    tried: usize,
    found: Vec<Lzs>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.found.len() >= self.req.want || self.tried >= self.req.budget
    }

    fn fill(&mut self, i: usize, values: &mut [u8; SLOTS]) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        if i == SLOTS {
            self.tried += 1;
            let d: [u8; 9] = values[..9].try_into().unwrap();
            let p: [u8; 27] = values[9..].try_into().unwrap();
            let lzs = Lzs::new(d, p, None)?;
            if self.accept(&lzs)? {
                self.found.push(lzs);
            }
            return Ok(());
        }
        let r = self.roots[i];
        if r < i {
            values[i] = values[r];
            return self.fill(i + 1, values);
        }
        if let Some(v) = self.fixed[r] {
            values[i] = v;
            return self.fill(i + 1, values);
        }
        for &v in &self.choices[i] {
            values[i] = v;
            self.fill(i + 1, values)?;
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    fn accept(&self, lzs: &Lzs) -> Result<bool> {
        let cipher = T310::new(lzs, self.z);
        let mode = BijectivityMode::Sampled { contexts: self.req.bijectivity_contexts, seed: self.req.seed };
        if matches!(check_bijective(&cipher, mode), BijectivityVerdict::NonBijective(_)) {
            return Ok(false);
        }
        for p in &self.req.required {
            if !verify_invariant(p, lzs, self.z, 1)?.is_proven() {
                return Ok(false);
            }
        }
        for spec in &self.req.forbidden {
            if !search_invariants(spec, lzs, self.z)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::VarId;
    use crate::invariant::check_theorem3;
    use crate::invariant::Theorem3Verdict;
    use crate::t310::Fixture;

    fn theorem3_constraints() -> Vec<Constraint> {
        ["D(8)=P(6)", "D(6)=32", "P(10)=30", "P(11)=22", "P(12)=24"].iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn parse_constraints() {
        assert_eq!("D(8)=P(6)".parse::<Constraint>().unwrap(), Constraint::Same(Slot::D(8), Slot::P(6)));
        assert_eq!("P12 = 24".parse::<Constraint>().unwrap(), Constraint::Value(Slot::P(12), 24));
        assert!("Q(1)=3".parse::<Constraint>().is_err());
        assert!("D(10)=3".parse::<Constraint>().is_err());
        assert_eq!(Constraint::Same(Slot::D(8), Slot::P(6)).to_string(), "D(8)=P(6)");
    }

    #[test]
    fn base_that_fits_comes_first() {
        let f = Fixture::get("551").unwrap();
        let mut req = SynthRequest::new(theorem3_constraints());
        req.base = Some(f.lzs.clone());
        req.z = Some(f.z.clone());
        req.required = vec![f.expand("AC+BD").unwrap()];
        let out = synthesize_wiring(&req).unwrap();
        assert_eq!(out[0].d_values(), f.lzs.d_values());
        assert_eq!(out[0].p_values(), f.lzs.p_values());
    }

    #[test]
    fn random_fill_meets_theorem3() {
        let f = Fixture::get("551").unwrap();
        let mut req = SynthRequest::new(theorem3_constraints());
        req.base = Some(f.lzs.clone());
        req.z = Some(f.z.clone());
        req.required = vec![f.expand("AC+BD").unwrap()];
        req.want = 4;
        req.seed = 3;
        let out = synthesize_wiring(&req).unwrap();
        assert_eq!(out.len(), 4);
        assert!(out[1..].iter().all(|l| l != &f.lzs));
        for lzs in &out {
            assert_eq!(check_theorem3(lzs, &f.z).unwrap(), Theorem3Verdict::HypothesesMetAndInvariant);
        }
        assert_eq!(out, synthesize_wiring(&req).unwrap());
    }

    #[test]
    fn two_cycle_wiring_443() {
        let f = Fixture::get("443").unwrap();
        let cond = AnnihilationCondition::parse("e", "(a+b)(c+f)").unwrap();
        let mut req = SynthRequest::new(Vec::new());
        req.base = Some(f.lzs.clone());
        req.annihilation = vec![cond];
        req.required = vec![f.expand("ABCD").unwrap(), f.expand("EFGH").unwrap()];
        let out = synthesize_wiring(&req).unwrap();
        assert_eq!(out[0].p_values(), f.lzs.p_values());
    }

    #[test]
    fn forbidden_searches_reject() {
        let f = Fixture::get("551").unwrap();
        let vars: Vec<VarId> = "efghmnop".chars().map(|c| VarId::from_letter(c).unwrap()).collect();
        let pins: Vec<Constraint> = (1..=9)
            .map(|j| Constraint::Value(Slot::D(j), f.lzs.d(j) as u8))
            .chain((1..=27).map(|j| Constraint::Value(Slot::P(j), f.lzs.p(j) as u8)))
            .collect();
        let mut req = SynthRequest::new(pins);
        req.z = Some(f.z.clone());
        req.forbidden = vec![InvariantSearchSpec::new(vars, 2)];
        assert_eq!(synthesize_wiring(&req), Err(Error::NoCandidate(1)));
    }

    #[test]
    fn infeasible_constraints() {
        let req = SynthRequest::new(vec!["D(1)=0".parse().unwrap(), "D(1)=12".parse().unwrap()]);
        assert!(matches!(synthesize_wiring(&req), Err(Error::Infeasible(_))));
        let req = SynthRequest::new(vec!["D(1)=P(1)".parse().unwrap(), "D(1)=0".parse().unwrap()]);
        assert!(matches!(synthesize_wiring(&req), Err(Error::Infeasible(_))));
        let req = SynthRequest::new(vec!["P(1)=37".parse().unwrap()]);
        assert!(matches!(synthesize_wiring(&req), Err(Error::Infeasible(_))));
    }
}
