use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Lzs, ZFunc};
use crate::error::{Error, Result};

pub const STATE_MASK: u64 = (1 << 36) - 1;

/// Input bits `x_i` with `i` not a multiple of 4; each moves to `y_{i+1}`.
pub const SHIFT_MASK: u64 = {
    let mut m = 0u64;
    let mut i = 1;
    while i <= 36 {
        if i % 4 != 0 {
            m |= 1 << (i - 1);
        }
        i += 1;
    }
    m
};

/// 36-bit cipher state; bit `i-1` holds `x_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CipherState(u64);

impl CipherState {
    pub fn new(bits: u64) -> Self {
        CipherState(bits & STATE_MASK)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `x_i`, `i` in `1..=36`.
    pub fn get(self, i: usize) -> bool {
        assert!((1..=36).contains(&i), "state index {i} out of range");
        self.0 >> (i - 1) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!((1..=36).contains(&i), "state index {i} out of range");
        if bit {
            self.0 |= 1 << (i - 1);
        } else {
            self.0 &= !(1 << (i - 1));
        }
    }

    /// Nine hex digits, `x1` in the least significant bit.
    pub fn from_hex(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.len() != 9 {
            return Err(Error::Hex(format!("state needs 9 hex digits, got {s:?}")));
        }
        u64::from_str_radix(t, 16).map(CipherState).map_err(|e| Error::Hex(format!("{s:?}: {e}")))
    }

    pub fn to_hex(self) -> String {
        format!("{:09x}", self.0)
    }
}

impl fmt::Debug for CipherState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CipherState({})", self.to_hex())
    }
}

impl fmt::Display for CipherState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// The 240-bit key `s[1..120][1..2]`. Round `m` reads pair `m mod 120`
/// (0-based), `K` from the first component and `L` from the second.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Key {
    s1: u128,
    s2: u128,
}

const KEY_MASK: u128 = (1 << 120) - 1;

impl Key {
    pub fn new(s1: u128, s2: u128) -> Self {
        Key { s1: s1 & KEY_MASK, s2: s2 & KEY_MASK }
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() != 240 {
            return Err(Error::Invalid(format!("key needs 240 bits, got {}", bits.len())));
        }
        let mut k = Key::default();
        for t in 0..120 {
            k.s1 |= (bits[2 * t] as u128) << t;
            k.s2 |= (bits[2 * t + 1] as u128) << t;
        }
        Ok(k)
    }

    /// Sixty hex digits read as a 240-bit number `N`; `s_{t,1}` is bit `2t`
    /// of `N` and `s_{t,2}` is bit `2t+1`.
    pub fn from_hex(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.len() != 60 || !t.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Hex(format!("key needs 60 hex digits, got {s:?}")));
        }
        let mut bits = vec![false; 240];
        for (pos, c) in t.chars().rev().enumerate() {
            let v = c.to_digit(16).unwrap();
            for b in 0..4 {
                bits[4 * pos + b] = v >> b & 1 == 1;
            }
        }
        Key::from_bits(&bits)
    }

    pub fn to_hex(&self) -> String {
        let mut digits = Vec::with_capacity(60);
        for pos in 0..60 {
            let mut v = 0u32;
            for b in 0..4 {
                let j = 4 * pos + b;
                let t = j / 2;
                let bit = if j % 2 == 0 { self.s1 >> t & 1 } else { self.s2 >> t & 1 };
                v |= (bit as u32) << b;
            }
            digits.push(std::char::from_digit(v, 16).unwrap());
        }
        digits.iter().rev().collect()
    }

    /// `(K, L)` for encryption round `m` (starting at 0).
    pub fn schedule(&self, m: usize) -> (bool, bool) {
        let t = m % 120;
        (self.s1 >> t & 1 == 1, self.s2 >> t & 1 == 1)
    }
}

/// Per-round bits: the public constant `F` and key bits `K`, `L`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug, Serialize, Deserialize)]
pub struct RoundInputs {
    pub f: bool,
    pub k: bool,
    pub l: bool,
}

impl RoundInputs {
    pub fn new(f: bool, k: bool, l: bool) -> Self {
        RoundInputs { f, k, l }
    }

    pub fn from_bits(b: u8) -> Self {
        RoundInputs::new(b & 1 == 1, b & 2 == 2, b & 4 == 4)
    }
}

/// One round with the wiring and Boolean function resolved into bit offsets.
///
/// All four instances `Z, Y, X, W` use the same function.
#[derive(Clone, Debug)]
pub struct T310 {
    lzs: Lzs,
    z: ZFunc,
    // state bit offsets; 64 marks the key bit K (D(j) = 0)
    d: [u8; 9],
    p: [u8; 27],
}

const K_SLOT: u8 = 64;

impl T310 {
    pub fn new(lzs: &Lzs, z: &ZFunc) -> Self {
        let d = std::array::from_fn(|j| match lzs.d(j + 1) {
            0 => K_SLOT,
            v => (v - 1) as u8,
        });
        let p = std::array::from_fn(|j| (lzs.p(j + 1) - 1) as u8);
        T310 { lzs: lzs.clone(), z: z.clone(), d, p }
    }

    pub fn lzs(&self) -> &Lzs {
        &self.lzs
    }

    pub fn z(&self) -> &ZFunc {
        &self.z
    }

    #[inline]
    fn zin(&self, x: u64, first: usize) -> usize {
        (0..6).fold(0, |acc, k| acc | ((((x >> self.p[first + k]) & 1) as usize) << k))
    }

    /// One round.
    #[inline]
    pub fn round(&self, state: CipherState, r: RoundInputs) -> CipherState {
        let x = state.0;
        let kb = r.k as u64;
        let bit = |s: u8| if s == K_SLOT { kb } else { (x >> s) & 1 };
        let px = |j: usize| (x >> self.p[j - 1]) & 1;
        let dx = |j: usize| bit(self.d[j - 1]);

        // Z1 = Z(L, x_P1..x_P5)
        let z1_in = (r.l as usize) | (0..5).fold(0, |a, k| a | ((px(k + 1) as usize) << (k + 1)));
        let z1 = self.z.eval(z1_in) as u64;
        let z2 = self.z.eval(self.zin(x, 6)) as u64;
        let z3 = self.z.eval(self.zin(x, 13)) as u64;
        let z4 = self.z.eval(self.zin(x, 20)) as u64;

        let mut t = r.f as u64;
        let y33 = t ^ dx(9);
        t ^= z1;
        let y29 = t ^ dx(8);
        t ^= px(6);
        let y25 = t ^ dx(7);
        t ^= z2;
        let y21 = t ^ dx(6);
        t ^= px(13);
        let y17 = t ^ dx(5);
        t ^= r.l as u64 ^ z3;
        let y13 = t ^ dx(4);
        t ^= px(20);
        let y9 = t ^ dx(3);
        t ^= z4;
        let y5 = t ^ dx(2);
        t ^= px(27);
        let y1 = t ^ dx(1);

        let fresh = y1 | y5 << 4 | y9 << 8 | y13 << 12 | y17 << 16 | y21 << 20 | y25 << 24 | y29 << 28 | y33 << 32;
        CipherState(((x & SHIFT_MASK) << 1) | fresh)
    }

    /// `rounds` rounds from round index 0, with `F` taken from `f_stream`.
    pub fn encrypt(&self, state: CipherState, key: &Key, f_stream: &[bool], rounds: usize) -> Result<CipherState> {
        if f_stream.len() < rounds {
            return Err(Error::FStreamTooShort { needed: rounds, got: f_stream.len() });
        }
        let mut s = state;
        for (m, &f) in f_stream.iter().enumerate().take(rounds) {
            let (k, l) = key.schedule(m);
            s = self.round(s, RoundInputs::new(f, k, l));
        }
        Ok(s)
    }
}

/// One round of the cipher defined by `lzs` and `z`.
pub fn round(state: CipherState, r: RoundInputs, lzs: &Lzs, z: &ZFunc) -> CipherState {
    T310::new(lzs, z).round(state, r)
}

pub fn encrypt(
    state: CipherState,
    key: &Key,
    f_stream: &[bool],
    rounds: usize,
    lzs: &Lzs,
    z: &ZFunc,
) -> Result<CipherState> {
    T310::new(lzs, z).encrypt(state, key, f_stream, rounds)
}
