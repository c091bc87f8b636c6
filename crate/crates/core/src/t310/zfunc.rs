use std::fmt;

use crate::boolpoly::{anf, parse, BoolPoly, Notation};
use crate::error::Result;

/// A 6-input Boolean function held as both truth table and ANF.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZFunc {
    tt: u64,
    anf: BoolPoly,
}

impl ZFunc {
    pub fn from_truth_table(tt: u64) -> Self {
        ZFunc { tt, anf: anf::anf_from_truth_table(tt) }
    }

    /// From an ANF over the local inputs `a..f`.
    pub fn from_anf(p: &BoolPoly) -> Result<Self> {
        let tt = anf::truth_table_from_anf(p)?;
        Ok(ZFunc { tt, anf: p.clone() })
    }

    /// Accepts ANF text (`1+d+e+f+de+cde+def`) or a 16-digit hex truth table.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let hexish = t.strip_prefix("0x").unwrap_or(t);
        if t.starts_with("0x") || (hexish.len() == 16 && hexish.chars().all(|c| c.is_ascii_hexdigit())) {
            return Ok(Self::from_truth_table(anf::parse_hex_table(t)?));
        }
        Self::from_anf(&parse(t)?)
    }

    pub fn truth_table(&self) -> u64 {
        self.tt
    }

    pub fn anf(&self) -> &BoolPoly {
        &self.anf
    }

    /// Value at input index `x` (bit 0 = first input `a`).
    #[inline]
    pub fn eval(&self, x: usize) -> bool {
        self.tt >> (x & 63) & 1 == 1
    }

    pub fn eval_bits(&self, inputs: [bool; 6]) -> bool {
        let x = inputs.iter().enumerate().fold(0, |x, (k, &b)| x | (b as usize) << k);
        self.eval(x)
    }

    pub fn hex(&self) -> String {
        anf::format_hex_table(self.tt)
    }
}

impl fmt::Display for ZFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.anf.to_text(Notation::Letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anf_and_table_agree() {
        let z = ZFunc::parse("1+d+e+f+de+cde+def").unwrap();
        let same = ZFunc::from_truth_table(z.truth_table());
        assert_eq!(z, same);
        assert_eq!(ZFunc::parse(&z.hex()).unwrap(), z);
        // d=1 (bit 3), e=f=0: 1+d = 0
        assert!(!z.eval(0b001000));
        assert!(z.eval(0));
        assert!(z.eval_bits([false, false, false, false, false, false]));
    }
}
