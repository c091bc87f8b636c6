//! Text form of polynomials.
//!
//! Terms are separated by `+`, juxtaposed factors multiply (`*` is
//! accepted too), `1` and `0` are constants and whitespace is ignored.
//! Letters `a..z` and `M..V` are state bits; `F`, `K`, `L` are the round
//! inputs; `Z1..Z4` (or `Z`, `Y`, `X`, `W`) are Boolean-function
//! outputs; `F[r]`, `K[r]`, `L[r]` are round-tagged inputs. Parentheses
//! group sums, so `(Y+m)(g+o)` parses to its expansion.

use std::fmt;

use super::poly::{bits, BoolPoly, Monomial};
use super::var::{self, Notation, Placeholder, VarId};
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<BoolPoly> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos == p.s.len() {
        return Err(p.err("empty polynomial"));
    }
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(r)
}

impl std::str::FromStr for BoolPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BoolPoly> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc += self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BoolPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<BoolPoly> {
        let c = self.peek().ok_or_else(|| self.err("expected a factor"))?;
        self.pos += 1;
        match c {
            b'(' => {
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            b'0' => Ok(BoolPoly::zero()),
            b'1' => Ok(BoolPoly::one()),
            b'Z' => {
                let idx = match self.s.get(self.pos) {
                    Some(d @ b'1'..=b'4') => {
                        self.pos += 1;
                        (d - b'1') as usize
                    }
                    Some(d) if d.is_ascii_digit() => return Err(self.err("placeholder index must be 1..4")),
                    _ => 0,
                };
                Ok(BoolPoly::var(Placeholder::from_index(idx).unwrap().var()))
            }
            b'Y' => Ok(BoolPoly::var(Placeholder::Z2.var())),
            b'X' => Ok(BoolPoly::var(Placeholder::Z3.var())),
            b'W' => Ok(BoolPoly::var(Placeholder::Z4.var())),
            b'F' | b'K' | b'L' => {
                let base = match c {
                    b'F' => var::F,
                    b'K' => var::K,
                    _ => var::L,
                };
                if self.s.get(self.pos) == Some(&b'[') {
                    self.pos += 1;
                    let start = self.pos;
                    while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        self.pos += 1;
                    }
                    let r: usize = std::str::from_utf8(&self.s[start..self.pos])
                        .unwrap()
                        .parse()
                        .map_err(|_| self.err("expected a round number"))?;
                    if self.s.get(self.pos) != Some(&b']') || r >= var::MAX_TAGGED_ROUNDS {
                        return Err(self.err("bad round tag"));
                    }
                    self.pos += 1;
                    return Ok(BoolPoly::var(VarId::tagged(base, r)));
                }
                Ok(BoolPoly::var(base))
            }
            c => VarId::from_letter(c as char).map(BoolPoly::var).ok_or_else(|| {
                self.pos -= 1;
                self.err("unknown variable")
            }),
        }
    }
}

/// Print key of a variable inside a monomial: placeholders first, then the
/// letters in alphabetical order, then F, K, L and tags.
pub(crate) fn print_key(v: VarId) -> (u8, u8) {
    match v.placeholder() {
        Some(p) => (0, p.index() as u8),
        None => (1, v.print_rank()),
    }
}

fn monomial_keys(m: u64) -> Vec<(u8, u8)> {
    let mut k: Vec<_> = bits(m).map(|s| print_key(VarId::from_slot(s).unwrap())).collect();
    k.sort_unstable();
    k
}

pub fn format_monomial(m: Monomial, notation: Notation) -> String {
    if m.0 == 0 {
        return "1".into();
    }
    let mut vars: Vec<VarId> = m.vars().collect();
    vars.sort_by_key(|&v| print_key(v));
    vars.into_iter().map(|v| v.name(notation)).collect()
}

/// Polynomial text with terms ordered by degree, then alphabetically.
pub fn format_poly(p: &BoolPoly, notation: Notation) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(u32, Vec<(u8, u8)>, u64)> =
        p.masks().iter().map(|&t| (t.count_ones(), monomial_keys(t), t)).collect();
    terms.sort();
    terms.into_iter().map(|(_, _, t)| format_monomial(Monomial(t), notation)).collect::<Vec<_>>().join("+")
}

/// Factored text: affine factors in parentheses followed by the cofactor.
pub fn format_factored(p: &BoolPoly, notation: Notation) -> String {
    let (factors, rest) = p.affine_factors();
    if factors.is_empty() {
        return format_poly(p, notation);
    }
    let mut out = String::new();
    for f in &factors {
        if f.len() == 1 {
            out.push_str(&format_poly(f, notation));
        } else {
            out.push('(');
            out.push_str(&format_poly(f, notation));
            out.push(')');
        }
    }
    if !rest.is_one() {
        out.push('(');
        out.push_str(&format_poly(&rest, notation));
        out.push(')');
    }
    out
}

impl fmt::Display for BoolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, Notation::Indexed))
    }
}

impl BoolPoly {
    pub fn to_text(&self, notation: Notation) -> String {
        format_poly(self, notation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print_round_trip() {
        for s in ["eg+fh+eo+fp+gm+hn+mo+np", "1+d+e+f+de+cde+def", "0", "1", "FKL+Z2m+MNOPQRSTUV"] {
            let p = parse(s).unwrap();
            assert_eq!(parse(&p.to_string()).unwrap(), p, "{s}");
        }
        assert_eq!(parse("1+d+e+f+de+cde+def").unwrap().to_string(), "1+d+e+f+de+cde+def");
    }

    #[test]
    fn case_sensitive_letters() {
        let m = parse("m").unwrap();
        let big_m = parse("M").unwrap();
        assert_ne!(m, big_m);
        assert_eq!(m.vars()[0].state_index(), Some(24));
        assert_eq!(big_m.vars()[0].state_index(), Some(10));
    }

    #[test]
    fn placeholder_aliases() {
        assert_eq!(parse("Y").unwrap(), parse("Z2").unwrap());
        assert_eq!(parse("W+Z").unwrap(), parse("Z4+Z1").unwrap());
        assert_eq!(parse("(Y+m)(g+o)").unwrap().to_text(Notation::Letters), "Yg+Yo+gm+mo");
        assert_eq!(parse("(Y+m)(g+o)").unwrap().to_string(), "Z2g+Z2o+gm+mo");
    }

    #[test]
    fn whitespace_star_and_parens() {
        assert_eq!(parse(" a * b + (c + d) e ").unwrap(), parse("ab+ce+de").unwrap());
        assert_eq!(parse("F[2]K").unwrap().to_string(), "KF[2]");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
        assert!(matches!(parse("a+"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(a+b"), Err(Error::Parse { .. })));
        assert!(matches!(parse("A"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse("Z5"), Err(Error::Parse { .. })));
    }

    #[test]
    fn factored_printing() {
        let p = parse("(Y+m)(g+o)").unwrap();
        let s = format_factored(&p, Notation::Letters);
        assert_eq!(parse(&s).unwrap(), p);
        assert!(s.starts_with('('), "{s}");
    }
}
