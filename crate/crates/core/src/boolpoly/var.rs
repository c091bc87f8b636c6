use std::fmt;

/// Number of cipher state bits.
pub const STATE_BITS: usize = 36;

/// A variable slot in a monomial mask.
///
/// Layout of the 64 slots:
///
/// | slots  | meaning                                         |
/// |--------|-------------------------------------------------|
/// | 0..36  | state bits `x1..x36` (slot `i-1` holds `x_i`)   |
/// | 36     | round constant `F`                              |
/// | 37     | key bit `K`                                     |
/// | 38     | key bit `L`                                     |
/// | 39     | reserved                                        |
/// | 40..44 | opaque Boolean-function outputs `Z1..Z4`        |
/// | 44..62 | `F`, `K`, `L` of earlier rounds (chained rounds)|
///
/// State bits print with the single-letter convention `a=x36 … z=x11`,
/// `M=x10 … V=x1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(u8);

pub const F: VarId = VarId(36);
pub const K: VarId = VarId(37);
pub const L: VarId = VarId(38);
pub const RESERVED: VarId = VarId(39);

const PLACEHOLDER_BASE: u8 = 40;
const TAG_BASE: u8 = 44;
/// Earlier rounds whose `F`, `K`, `L` can be kept apart in one mask.
pub const MAX_TAGGED_ROUNDS: usize = 6;

/// One of the four Boolean-function instances of a round.
///
/// `Z1 = Z(L, ...)`, `Z2 = Y(...)`, `Z3 = X(...)`, `Z4 = W(...)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Placeholder {
    Z1,
    Z2,
    Z3,
    Z4,
}

impl Placeholder {
    pub const ALL: [Placeholder; 4] = [Placeholder::Z1, Placeholder::Z2, Placeholder::Z3, Placeholder::Z4];

    pub fn index(self) -> usize {
        match self {
            Placeholder::Z1 => 0,
            Placeholder::Z2 => 1,
            Placeholder::Z3 => 2,
            Placeholder::Z4 => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn var(self) -> VarId {
        VarId(PLACEHOLDER_BASE + self.index() as u8)
    }

    /// The single-letter name used for this instance: Z, Y, X or W.
    pub fn letter(self) -> char {
        ['Z', 'Y', 'X', 'W'][self.index()]
    }
}

impl fmt::Display for Placeholder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}", self.index() + 1)
    }
}

/// The local input names `a..f` of a 6-input Boolean function.
///
/// Local input `k` (0-based) is identified with the state letter of the same
/// name, so local polynomials are ordinary [`BoolPoly`](super::BoolPoly)
/// values over the slots of `a..f` (`x36..x31`).
pub fn local_input(k: usize) -> VarId {
    assert!(k < 6, "local input index {k} out of range");
    VarId::state(36 - k)
}

/// Inverse of [`local_input`].
pub fn local_index(v: VarId) -> Option<usize> {
    let i = v.state_index()?;
    (31..=36).contains(&i).then(|| 36 - i)
}

impl VarId {
    pub fn from_slot(slot: u8) -> Option<Self> {
        (slot < 64).then_some(VarId(slot))
    }

    /// Slot of state bit `x_i`, `i` in `1..=36`.
    pub fn state(i: usize) -> Self {
        assert!((1..=STATE_BITS).contains(&i), "state index {i} out of range");
        VarId((i - 1) as u8)
    }

    /// Slot of `F`, `K` or `L` from an earlier round, `round` in `0..MAX_TAGGED_ROUNDS`.
    pub fn tagged(base: VarId, round: usize) -> Self {
        assert!(round < MAX_TAGGED_ROUNDS);
        let off = match base {
            F => 0,
            K => 1,
            L => 2,
            _ => panic!("only F, K, L can be round-tagged"),
        };
        VarId(TAG_BASE + (3 * round + off) as u8)
    }

    pub fn slot(self) -> u8 {
        self.0
    }

    pub fn bit(self) -> u64 {
        1u64 << self.0
    }

    /// `Some(i)` when this is state bit `x_i`.
    pub fn state_index(self) -> Option<usize> {
        ((self.0 as usize) < STATE_BITS).then(|| self.0 as usize + 1)
    }

    pub fn is_state(self) -> bool {
        (self.0 as usize) < STATE_BITS
    }

    pub fn is_round_input(self) -> bool {
        self == F || self == K || self == L
    }

    pub fn placeholder(self) -> Option<Placeholder> {
        (PLACEHOLDER_BASE..TAG_BASE)
            .contains(&self.0)
            .then(|| Placeholder::from_index((self.0 - PLACEHOLDER_BASE) as usize).unwrap())
    }

    /// Letter of a state variable.
    pub fn letter(self) -> Option<char> {
        let i = self.state_index()?;
        Some(if i >= 11 { (b'a' + (36 - i) as u8) as char } else { (b'M' + (10 - i) as u8) as char })
    }

    /// State variable named by a letter, `a..z` or `M..V`.
    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(VarId::state(36 - (c as usize - 'a' as usize))),
            'M'..='V' => Some(VarId::state(10 - (c as usize - 'M' as usize))),
            _ => None,
        }
    }

    /// Ordering used when printing: letters first (a..z, M..V), then F, K, L,
    /// then the earlier-round tags. Placeholders are printed ahead of
    /// everything and are ranked separately.
    pub(crate) fn print_rank(self) -> u8 {
        if self.is_state() {
            35 - self.0
        } else {
            self.0
        }
    }

    /// Name in the given notation.
    pub fn name(self, notation: Notation) -> String {
        if let Some(c) = self.letter() {
            return c.to_string();
        }
        if let Some(p) = self.placeholder() {
            return match notation {
                Notation::Indexed => p.to_string(),
                Notation::Letters => p.letter().to_string(),
            };
        }
        match self {
            F => "F".into(),
            K => "K".into(),
            L => "L".into(),
            RESERVED => "#39".into(),
            v => {
                let t = (v.0 - TAG_BASE) as usize;
                format!("{}[{}]", ["F", "K", "L"][t % 3], t / 3)
            }
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name(Notation::Indexed))
    }
}

/// How Boolean-function placeholders are printed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Notation {
    /// `Z1`, `Z2`, `Z3`, `Z4`.
    #[default]
    Indexed,
    /// `Z`, `Y`, `X`, `W`.
    Letters,
}
