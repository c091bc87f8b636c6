use std::fmt;

use serde::Serialize;

use crate::boolpoly::{anf, parse, BoolPoly, Notation};
use crate::error::{Error, Result};
use crate::invariant::verify::{verify_invariant, Verdict, Witness};
use crate::t310::{Fixture, Lzs, ZFunc};

/// The requirement `(Z + offset) * factor = 0` on a six-input function,
/// both polynomials written over the local inputs `a..f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilationCondition {
    offset: BoolPoly,
    factor: BoolPoly,
    offset_tt: u64,
    factor_tt: u64,
}

impl AnnihilationCondition {
    pub fn new(offset: BoolPoly, factor: BoolPoly) -> Result<Self> {
        if !offset.is_affine() {
            return Err(Error::Invalid(format!("offset {offset} is not affine")));
        }
        let offset_tt = anf::truth_table_from_anf(&offset)?;
        let factor_tt = anf::truth_table_from_anf(&factor)?;
        Ok(AnnihilationCondition { offset, factor, offset_tt, factor_tt })
    }

    pub fn parse(offset: &str, factor: &str) -> Result<Self> {
        Self::new(parse(offset)?, parse(factor)?)
    }

    pub fn offset(&self) -> &BoolPoly {
        &self.offset
    }

    pub fn factor(&self) -> &BoolPoly {
        &self.factor
    }

    /// Inputs where the factor is 1, so `Z` must equal the offset.
    pub fn forced_mask(&self) -> u64 {
        self.factor_tt
    }

    /// Truth table of the offset.
    pub fn offset_table(&self) -> u64 {
        self.offset_tt
    }

    /// The same condition with the factor multiplied by `extra`.
    pub fn strengthen(&self, extra: &BoolPoly) -> Result<Self> {
        Self::new(self.offset.clone(), &self.factor * extra)
    }
}

impl fmt::Display for AnnihilationCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let off = self.offset.to_text(Notation::Letters);
        let fac = crate::boolpoly::format_factored(&self.factor, Notation::Letters);
        write!(f, "(Z+{off})({fac})=0")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum AnnihilationVerdict {
    Holds,
    /// Smallest input index (bit 0 = `a`) where the product is 1.
    Fails {
        input: usize,
    },
}

impl AnnihilationVerdict {
    pub fn holds(self) -> bool {
        self == AnnihilationVerdict::Holds
    }
}

pub fn check_annihilation(z: &ZFunc, cond: &AnnihilationCondition) -> AnnihilationVerdict {
    let bad = (z.truth_table() ^ cond.offset_tt) & cond.factor_tt;
    if bad == 0 {
        AnnihilationVerdict::Holds
    } else {
        AnnihilationVerdict::Fails { input: bad.trailing_zeros() as usize }
    }
}

/// Every function meeting a condition: the forced entries, how many are
/// free, and one representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSolution {
    /// `(input index, forced value)` in increasing index order.
    pub forced: Vec<(usize, bool)>,
    pub free_count: u32,
    pub sample: ZFunc,
}

impl ZSolution {
    /// Exact number of solutions, `2^free_count`.
    pub fn count(&self) -> u128 {
        1u128 << self.free_count
    }

    /// `log2` of the chance that a uniformly random function qualifies.
    pub fn probability_log2(&self) -> i32 {
        -(self.forced.len() as i32)
    }
}

/// Solves one or more conditions at once. Free entries of the sample are
/// set, lowest index first, so its weight comes as close to 32 as possible.
pub fn solve_z(conds: &[AnnihilationCondition]) -> Result<ZSolution> {
    let mut mask = 0u64;
    let mut values = 0u64;
    for c in conds {
        let clash = mask & c.factor_tt & (values ^ c.offset_tt);
        if clash != 0 {
            return Err(Error::Infeasible(format!("conditions disagree at input {}", clash.trailing_zeros())));
        }
        values |= c.offset_tt & c.factor_tt;
        mask |= c.factor_tt;
    }
    let forced = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| (i, values >> i & 1 == 1)).collect();
    let mut need = 32u32.saturating_sub(values.count_ones());
    let mut tt = values;
    for i in 0..64 {
        if need == 0 {
            break;
        }
        if mask >> i & 1 == 0 {
            tt |= 1 << i;
            need -= 1;
        }
    }
    Ok(ZSolution { forced, free_count: 64 - mask.count_ones(), sample: ZFunc::from_truth_table(tt) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZMetrics {
    pub weight: u32,
    /// 0 for constant functions, including the zero function.
    pub degree: u32,
    pub nonlinearity: u32,
}

pub fn z_metrics(z: &ZFunc) -> ZMetrics {
    ZMetrics {
        weight: z.truth_table().count_ones(),
        degree: z.anf().degree().unwrap_or(0),
        nonlinearity: anf::nonlinearity(z.truth_table()),
    }
}

/// One unmet hypothesis of the AC+BD criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Theorem3Failure {
    /// `lhs` should equal `expected` but holds `found`.
    Wiring {
        lhs: String,
        expected: String,
        found: usize,
    },
    Annihilation {
        input: usize,
    },
}

impl fmt::Display for Theorem3Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem3Failure::Wiring { lhs, expected, found } => {
                write!(f, "{lhs} = {found}, needs {expected}")
            }
            Theorem3Failure::Annihilation { input } => {
                write!(f, "(Z+f)(d+e) = 1 at input {input:06b} (fedcba)")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Theorem3Verdict {
    HypothesesMetAndInvariant,
    HypothesesUnmet {
        failures: Vec<Theorem3Failure>,
    },
    /// Only reachable through a bug: the hypotheses guarantee the invariant.
    HypothesesMetButViolated {
        witness: Witness,
    },
}

/// Checks the wiring equalities `D(8)=P(6)`, `D(6)=32`, `P(10)=30`,
/// `P(11)=22`, `P(12)=24` and `(Z+f)(d+e)=0`. When all hold, confirms that
/// `AC+BD` (with `A=e+m, B=f+n, C=g+o, D=h+p`) is proven invariant.
pub fn check_theorem3(lzs: &Lzs, z: &ZFunc) -> Result<Theorem3Verdict> {
    let mut failures = Vec::new();
    let mut want = |lhs: &str, found: usize, expected: usize, expected_text: String| {
        if found != expected {
            failures.push(Theorem3Failure::Wiring { lhs: lhs.into(), expected: expected_text, found });
        }
    };
    want("D(8)", lzs.d(8), lzs.p(6), format!("P(6) = {}", lzs.p(6)));
    want("D(6)", lzs.d(6), 32, "32".into());
    want("P(10)", lzs.p(10), 30, "30".into());
    want("P(11)", lzs.p(11), 22, "22".into());
    want("P(12)", lzs.p(12), 24, "24".into());
    let cond = AnnihilationCondition::parse("f", "d+e")?;
    if let AnnihilationVerdict::Fails { input } = check_annihilation(z, &cond) {
        failures.push(Theorem3Failure::Annihilation { input });
    }
    if !failures.is_empty() {
        return Ok(Theorem3Verdict::HypothesesUnmet { failures });
    }
    let p = Fixture::get("551")?.expand("AC+BD")?;
    Ok(match verify_invariant(&p, lzs, z, 1)? {
        Verdict::Proven => Theorem3Verdict::HypothesesMetAndInvariant,
        Verdict::Refuted(witness) => Theorem3Verdict::HypothesesMetButViolated { witness },
    })
}
