//! Bit-sliced truth tables over a small ordered set of variables.

use super::poly::BoolPoly;

const LOW_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// In-place upward Möbius transform over `k` variables: entry `x` becomes
/// the XOR of all entries at subsets of `x`. It is an involution.
pub fn mobius_in_place(words: &mut [u64], k: usize) {
    for (j, &m) in LOW_MASKS.iter().enumerate().take(k.min(6)) {
        let s = 1 << j;
        for w in words.iter_mut() {
            *w ^= (*w & m) << s;
        }
    }
    for j in 6..k {
        let stride = 1usize << (j - 6);
        let mut base = 0;
        while base < words.len() {
            for i in base..base + stride {
                words[i + stride] ^= words[i];
            }
            base += 2 * stride;
        }
    }
}

/// Truth table of `p` over the variables at `slots` (in order; slot `slots[j]`
/// is bit `j` of the point index). `p` must not mention other variables.
pub fn truth_table(p: &BoolPoly, slots: &[u8]) -> Vec<u64> {
    let k = slots.len();
    let nwords = if k <= 6 { 1 } else { 1 << (k - 6) };
    let mut pos = [u8::MAX; 64];
    for (j, &s) in slots.iter().enumerate() {
        pos[s as usize] = j as u8;
    }
    let mut words = vec![0u64; nwords];
    for &t in p.masks() {
        let mut idx = 0usize;
        for s in super::poly::bits(t) {
            let j = pos[s as usize];
            debug_assert!(j != u8::MAX, "variable outside the table");
            idx |= 1 << j;
        }
        words[idx >> 6] ^= 1 << (idx & 63);
    }
    mobius_in_place(&mut words, k);
    words
}

/// Does the affine form `c + sum_{j in subset} v_j` divide the function with
/// truth table `tp` over `k` variables?
pub fn affine_divides(tp: &[u64], k: usize, subset: u32, c: bool) -> bool {
    let mut low = 0u64;
    for (j, &m) in LOW_MASKS.iter().enumerate().take(k.min(6)) {
        if subset & (1 << j) != 0 {
            low ^= !m;
        }
    }
    let valid = if k >= 6 { !0 } else { (1u64 << (1 << k)) - 1 };
    let high = (subset >> 6.min(k)) as usize;
    tp.iter().enumerate().all(|(w, &t)| {
        let par = ((w & high).count_ones() & 1 == 1) ^ c;
        let a = (if par { !low } else { low }) & valid;
        t & !a == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::parse;

    #[test]
    fn mobius_is_involution_multiword() {
        let mut w: Vec<u64> = (0..16u64).map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15)).collect();
        let orig = w.clone();
        mobius_in_place(&mut w, 10);
        mobius_in_place(&mut w, 10);
        assert_eq!(w, orig);
    }

    #[test]
    fn table_matches_pointwise_evaluation() {
        let p = parse("ab+cde+f+gh+1").unwrap();
        let slots: Vec<u8> = p.vars().iter().map(|v| v.slot()).collect();
        let tt = truth_table(&p, &slots);
        for x in 0..(1usize << slots.len()) {
            let mut values = 0u64;
            for (j, &s) in slots.iter().enumerate() {
                if x >> j & 1 == 1 {
                    values |= 1 << s;
                }
            }
            assert_eq!(tt[x >> 6] >> (x & 63) & 1 == 1, p.eval_mask(values), "x={x}");
        }
    }

    #[test]
    fn affine_divides_agrees_with_divides() {
        let p = parse("(a+c+1)(bd+e)").unwrap();
        let slots: Vec<u8> = p.vars().iter().map(|v| v.slot()).collect();
        let tp = truth_table(&p, &slots);
        let k = slots.len();
        for subset in 1u32..(1 << k) {
            for c in [false, true] {
                let mut a = crate::boolpoly::BoolPoly::constant(c);
                for (j, &s) in slots.iter().enumerate() {
                    if subset >> j & 1 == 1 {
                        a += crate::boolpoly::BoolPoly::var(crate::boolpoly::VarId::from_slot(s).unwrap());
                    }
                }
                assert_eq!(affine_divides(&tp, k, subset, c), a.divides(&p).unwrap(), "{a}");
            }
        }
    }
}
