//! Six-input Boolean functions: Möbius and Walsh–Hadamard transforms.
//!
//! A truth table is a `u64` whose bit `i` is the value at input `i`, where
//! input `i` reads its six argument bits `a..f` with `a` as the least
//! significant bit. ANF coefficients use the same indexing: bit `i` is the
//! coefficient of the monomial made of the inputs set in `i`.

use super::poly::BoolPoly;
use super::table::mobius_in_place;
use super::var::{local_index, local_input};
use crate::error::{Error, Result};

/// Möbius transform of a 6-variable table; an involution.
pub fn mobius(tt: u64) -> u64 {
    let mut w = [tt];
    mobius_in_place(&mut w, 6);
    w[0]
}

/// Monomial over the local inputs `a..f` for a coefficient index.
pub fn local_monomial(index: usize) -> u64 {
    (0..6).filter(|k| index >> k & 1 == 1).fold(0, |m, k| m | local_input(k).bit())
}

/// ANF polynomial (over `a..f`) of a truth table.
pub fn anf_from_truth_table(tt: u64) -> BoolPoly {
    let coeffs = mobius(tt);
    BoolPoly::from_masks((0..64).filter(|i| coeffs >> i & 1 == 1).map(local_monomial).collect())
}

/// ANF coefficient vector of a polynomial over `a..f`.
pub fn anf_coefficients(p: &BoolPoly) -> Result<u64> {
    let mut coeffs = 0u64;
    for m in p.terms() {
        let mut idx = 0;
        for v in m.vars() {
            let k = local_index(v).ok_or_else(|| Error::NotLocal(p.to_string()))?;
            idx |= 1 << k;
        }
        coeffs ^= 1 << idx;
    }
    Ok(coeffs)
}

/// Truth table of a polynomial over `a..f`.
pub fn truth_table_from_anf(p: &BoolPoly) -> Result<u64> {
    Ok(mobius(anf_coefficients(p)?))
}

/// Walsh–Hadamard spectrum: `W(w) = sum_x (-1)^(f(x) + w.x)`.
pub fn walsh_spectrum(tt: u64) -> [i32; 64] {
    let mut s = [0i32; 64];
    for (x, v) in s.iter_mut().enumerate() {
        *v = if tt >> x & 1 == 1 { -1 } else { 1 };
    }
    let mut h = 1;
    while h < 64 {
        for i in (0..64).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (s[j], s[j + h]);
                s[j] = a + b;
                s[j + h] = a - b;
            }
        }
        h *= 2;
    }
    s
}

/// Distance to the nearest affine function, `32 - max|W|/2`.
pub fn nonlinearity(tt: u64) -> u32 {
    let max = walsh_spectrum(tt).iter().map(|w| w.unsigned_abs()).max().unwrap();
    32 - max / 2
}

pub fn parse_hex_table(s: &str) -> Result<u64> {
    let t = s.trim();
    let t = t.strip_prefix("0x").unwrap_or(t);
    if t.len() != 16 {
        return Err(Error::Hex(format!("truth table needs 16 hex digits, got {:?}", s)));
    }
    u64::from_str_radix(t, 16).map_err(|e| Error::Hex(format!("{s:?}: {e}")))
}

pub fn format_hex_table(tt: u64) -> String {
    format!("{tt:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::parse;

    #[test]
    fn zero_table_is_zero_polynomial() {
        assert!(anf_from_truth_table(0).is_zero());
    }

    #[test]
    fn projection_onto_last_input() {
        // f is input bit 5
        let tt = (0..64u64).filter(|x| x >> 5 & 1 == 1).fold(0, |t, x| t | 1 << x);
        assert_eq!(anf_from_truth_table(tt), parse("f").unwrap());
    }

    #[test]
    fn known_function_round_trip() {
        let z = parse("1+d+e+f+de+cde+def").unwrap();
        let tt = truth_table_from_anf(&z).unwrap();
        let back = anf_from_truth_table(tt);
        assert_eq!(back, z);
        assert_eq!(back.len(), 7);
    }

    #[test]
    fn non_local_polynomial_is_rejected() {
        assert!(matches!(truth_table_from_anf(&parse("g").unwrap()), Err(Error::NotLocal(_))));
    }

    #[test]
    fn walsh_of_constant() {
        let w = walsh_spectrum(0);
        assert_eq!(w[0], 64);
        assert!(w[1..].iter().all(|&v| v == 0));
        assert_eq!(nonlinearity(0), 0);
    }

    #[test]
    fn hex_round_trip() {
        assert_eq!(parse_hex_table(&format_hex_table(0xdead_beef_0123_4567)).unwrap(), 0xdead_beef_0123_4567);
        assert!(parse_hex_table("abc").is_err());
    }
}
