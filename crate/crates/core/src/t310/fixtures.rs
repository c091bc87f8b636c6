//! The five published wirings with their Boolean functions and factors.

use super::{Lzs, ZFunc};
use crate::boolpoly::{parse, BoolPoly};
use crate::error::{Error, Result};

pub const NAMES: [&str; 5] = ["551", "558", "550", "443", "444"];

const LZS_551: &str = "551: P=17,4,33,12,10,8,5,11,9,30,22,24,20,2,21,34,1,25,\
13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24";
const LZS_558: &str = "558: P=17,4,33,12,10,8,23,24,31,25,16,10,20,2,21,34,\
1,25,13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24";
const LZS_550: &str = "550: P=17,4,33,12,10,8,22,23,24,31,30,20,20,2,21,34,\
1,25,13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24";
const LZS_443: &str = "443: 9,19,33,7,10,3,18,26,17,30,4,25,28,2,21,34,1,11,\
15,8,14,6,13,29,12,5,27 D=24,16,36,12,20,32,4,8,28";
const LZS_444: &str = "444: P=17,1,33,2,10,3,18,26,19,27,36,5,16,32,21,34,8,\
25,13,28,14,6,15,7,12,23,30 D=24,20,4,12,8,32,36,16,28";

pub const Z_551: &str = "1+d+e+f+de+cde+def";
pub const Z_558: &str = "1+a+ab+c+bc";
pub const Z_550: &str = "1+b+c+d+aef+abef";
pub const Z_443: &str = "1+a+bc+abc+d+abd+acd+bcd+be+abe+ce+bce+abce+ade+abde+acde+f+af+acf+bcf+adf+bdf+abdf+ef+bef+abef+cef+bcef+adef+acdef";
pub const Z_444: &str = "fedcb+fedca+fedc+fecba+fecb+feca+fec+feba+feb+fea+fe\
+fdb+fd+fcb+fc+fb+f+edcb+ed+ec+dcb+dca+da+d+cb+a+1";

const FACTORS_4: [(char, &str); 4] = [('A', "e+m"), ('B', "f+n"), ('C', "g+o"), ('D', "h+p")];
const FACTORS_8: [(char, &str); 8] =
    [('A', "q+i"), ('B', "r+j"), ('C', "s+k"), ('D', "t+l"), ('E', "u+O"), ('F', "v+P"), ('G', "w+Q"), ('H', "x+R")];

/// A wiring, its Boolean function and the named affine factors used to
/// write its invariants.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub lzs: Lzs,
    pub z: ZFunc,
    pub factors: Vec<(char, BoolPoly)>,
    /// Invariants (in factor notation) that hold for every key and IV.
    pub invariants: Vec<&'static str>,
    /// Factor-notation polynomials that are not invariants.
    pub non_invariants: Vec<&'static str>,
}

impl Fixture {
    pub fn get(name: &str) -> Result<Fixture> {
        let (lzs, z, factors, inv, non): (_, _, &[(char, &str)], Vec<_>, Vec<_>) = match name {
            "551" => (LZS_551, Z_551, &FACTORS_4, vec!["AC+BD", "ABCD"], vec!["A", "B", "C", "D"]),
            "558" => (LZS_558, Z_558, &FACTORS_4, vec!["ABCD"], vec!["AC+BD"]),
            "550" => (LZS_550, Z_550, &FACTORS_4, vec!["ABCD"], vec!["AC+BD"]),
            "443" => (LZS_443, Z_443, &FACTORS_8, vec!["ABCD", "EFGH", "ABCDEFGH"], vec![]),
            "444" => (LZS_444, Z_444, &FACTORS_8, vec!["ABCDEFGH"], vec!["ABCD", "EFGH"]),
            _ => return Err(Error::UnknownFixture(name.to_string())),
        };
        Ok(Fixture {
            name: NAMES.iter().find(|n| **n == name).unwrap(),
            lzs: Lzs::parse(lzs)?,
            z: ZFunc::parse(z)?,
            factors: factors.iter().map(|&(c, s)| (c, parse(s).unwrap())).collect(),
            invariants: inv,
            non_invariants: non,
        })
    }

    pub fn all() -> Vec<Fixture> {
        NAMES.iter().map(|n| Fixture::get(n).unwrap()).collect()
    }

    pub fn factor(&self, name: char) -> Option<&BoolPoly> {
        self.factors.iter().find(|(c, _)| *c == name).map(|(_, p)| p)
    }

    /// Expands an expression over factor letters, e.g. `"AC+BD"`.
    pub fn expand(&self, expr: &str) -> Result<BoolPoly> {
        expand_factors(&self.factors, expr)
    }
}

/// Expands a sum of products of named factors, e.g. `"AC+BD"` or `"1"`.
pub fn expand_factors(factors: &[(char, BoolPoly)], expr: &str) -> Result<BoolPoly> {
    let mut acc = BoolPoly::zero();
    for term in expr.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(Error::Parse { pos: 0, msg: format!("empty term in {expr:?}") });
        }
        let mut prod = BoolPoly::one();
        for c in term.chars().filter(|c| !c.is_whitespace() && *c != '*') {
            if c == '1' {
                continue;
            }
            let f = factors
                .iter()
                .find(|(n, _)| *n == c)
                .map(|(_, p)| p)
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown factor {c:?}") })?;
            prod = &prod * f;
        }
        acc += prod;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_load() {
        let all = Fixture::all();
        assert_eq!(all.len(), 5);
        assert_eq!(all[3].lzs.d(1), 24);
    }

    #[test]
    fn function_term_counts() {
        assert_eq!(Fixture::get("551").unwrap().z.anf().len(), 7);
        assert_eq!(Fixture::get("443").unwrap().z.anf().len(), 30);
        assert_eq!(Fixture::get("444").unwrap().z.anf().len(), 27);
    }

    #[test]
    fn ac_bd_matches_printed_polynomial() {
        let fx = Fixture::get("551").unwrap();
        assert_eq!(fx.expand("AC+BD").unwrap(), parse("eg+fh+eo+fp+gm+hn+mo+np").unwrap());
        let abcd = parse("efgh+fghm+eghn+ghmn+efho+fhmo+ehno+hmno+efgp+fgmp+egnp+gmnp+efop+fmop+enop+mnop").unwrap();
        assert_eq!(fx.expand("ABCD").unwrap(), abcd);
        assert_eq!(abcd.len(), 16);
    }

    #[test]
    fn factor_letters_match_state_indices() {
        let fx = Fixture::get("443").unwrap();
        let a = fx.factor('A').unwrap();
        let idx: Vec<_> = a.vars().iter().map(|v| v.state_index().unwrap()).collect();
        assert_eq!(idx, vec![20, 28]);
        let h = fx.factor('H').unwrap();
        let idx: Vec<_> = h.vars().iter().map(|v| v.state_index().unwrap()).collect();
        assert_eq!(idx, vec![5, 13]);
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(Fixture::get("999"), Err(Error::UnknownFixture(_))));
    }
}
