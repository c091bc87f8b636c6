//! Bijectivity of the round map.
//!
//! A round copies the 27 bits `x_i` (`i` not a multiple of 4) to `y_{i+1}`,
//! so two inputs that collide under the same `(F, K, L)` can only differ in
//! the nine bits `x4, x8, ..., x36`. The round is a bijection iff, for every
//! setting of the other 27 bits and of `(F, K, L)` (a *context*), the nine
//! fresh outputs `y1, y5, ..., y33` are a permutation of those nine bits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cipher::{CipherState, RoundInputs, SHIFT_MASK, T310};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BijectivityMode {
    Sampled { contexts: u64, seed: u64 },
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Collision {
    pub first: CipherState,
    pub second: CipherState,
    pub inputs: RoundInputs,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BijectivityVerdict {
    /// No collision in the sampled contexts.
    Evidence {
        contexts: u64,
    },
    NonBijective(Collision),
    /// Every context checked.
    Proven,
}

#[inline]
fn scatter_free(v: u32) -> u64 {
    (0..9).fold(0, |s, j| s | ((v as u64 >> j) & 1) << (4 * j + 3))
}

#[inline]
fn gather_fresh(y: u64) -> u32 {
    (0..9).fold(0, |v, j| v | (((y >> (4 * j)) & 1) as u32) << j)
}

/// Spreads 27 context bits over the shifted positions.
fn scatter_fixed(c: u64) -> u64 {
    let mut s = 0u64;
    let mut k = 0;
    for i in 0..36 {
        if SHIFT_MASK >> i & 1 == 1 {
            s |= ((c >> k) & 1) << i;
            k += 1;
        }
    }
    s
}

/// Checks one context, returning a collision if the fresh bits repeat.
pub fn check_context(cipher: &T310, fixed: u64, r: RoundInputs) -> Option<Collision> {
    let base = fixed & SHIFT_MASK;
    let mut seen = [u16::MAX; 512];
    for v in 0..512u32 {
        let s = CipherState::new(base | scatter_free(v));
        let out = gather_fresh(cipher.round(s, r).bits()) as usize;
        if seen[out] != u16::MAX {
            return Some(Collision {
                first: CipherState::new(base | scatter_free(seen[out] as u32)),
                second: s,
                inputs: r,
            });
        }
        seen[out] = v as u16;
    }
    None
}

pub fn check_bijective(cipher: &T310, mode: BijectivityMode) -> BijectivityVerdict {
    match mode {
        BijectivityMode::Sampled { contexts, seed } => {
            let hit = (0..contexts).into_par_iter().find_map_first(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let fixed: u64 = rng.gen();
                let r = RoundInputs::from_bits(rng.gen());
                check_context(cipher, fixed, r)
            });
            match hit {
                Some(c) => BijectivityVerdict::NonBijective(c),
                None => BijectivityVerdict::Evidence { contexts },
            }
        }
        BijectivityMode::Exhaustive => {
            let hit = (0..1u64 << 30).into_par_iter().find_map_first(|i| {
                let fixed = scatter_fixed(i & ((1 << 27) - 1));
                check_context(cipher, fixed, RoundInputs::from_bits((i >> 27) as u8))
            });
            match hit {
                Some(c) => BijectivityVerdict::NonBijective(c),
                None => BijectivityVerdict::Proven,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::t310::fixtures::Fixture;
    use crate::t310::{Lzs, ZFunc};

    #[test]
    fn scatter_gather() {
        assert_eq!(scatter_free(0x1ff).count_ones(), 9);
        assert_eq!(scatter_free(0x1ff) & SHIFT_MASK, 0);
        assert_eq!(scatter_fixed((1 << 27) - 1), SHIFT_MASK);
        // fresh positions are 1, 5, ..., 33 (bits 0, 4, ..., 32)
        assert_eq!(gather_fresh(0x1_1111_1111), 0x1ff);
    }

    #[test]
    fn fixture_551_sampled() {
        let fx = Fixture::get("551").unwrap();
        let c = T310::new(&fx.lzs, &fx.z);
        let v = check_bijective(&c, BijectivityMode::Sampled { contexts: 2000, seed: 7 });
        assert_eq!(v, BijectivityVerdict::Evidence { contexts: 2000 });
    }

    #[test]
    fn broken_wiring_collides() {
        // D(2) = D(1) = 0 with Z = 0: y1 + y5 = x_P27 is constant on the free bits
        let base = Fixture::get("551").unwrap().lzs;
        let mut d = *base.d_values();
        d[1] = d[0];
        let lzs = Lzs::new(d, *base.p_values(), None).unwrap();
        let z = ZFunc::from_truth_table(0);
        let c = T310::new(&lzs, &z);
        match check_bijective(&c, BijectivityMode::Sampled { contexts: 10, seed: 1 }) {
            BijectivityVerdict::NonBijective(col) => {
                assert_ne!(col.first, col.second);
                assert_eq!(c.round(col.first, col.inputs), c.round(col.second, col.inputs));
            }
            v => panic!("expected a collision, got {v:?}"),
        }
    }
}
