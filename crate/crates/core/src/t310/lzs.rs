use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Long-term key: the wiring maps `D: 1..9 -> 0..36` and `P: 1..27 -> 1..36`.
///
/// `D(j) = 0` wires in the key bit `K` instead of a state bit. `P` need not be
/// injective.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Lzs {
    d: [u8; 9],
    p: [u8; 27],
    label: Option<String>,
}

impl Lzs {
    pub fn new(d: [u8; 9], p: [u8; 27], label: Option<String>) -> Result<Self> {
        for (j, &v) in d.iter().enumerate() {
            if v > 36 {
                return Err(Error::OutOfRange { field: 'D', index: j + 1, value: v as usize });
            }
        }
        for (j, &v) in p.iter().enumerate() {
            if !(1..=36).contains(&v) {
                return Err(Error::OutOfRange { field: 'P', index: j + 1, value: v as usize });
            }
        }
        Ok(Lzs { d, p, label })
    }

    /// `D(j)`, `j` in `1..=9`.
    pub fn d(&self, j: usize) -> usize {
        self.d[j - 1] as usize
    }

    /// `P(j)`, `j` in `1..=27`.
    pub fn p(&self, j: usize) -> usize {
        self.p[j - 1] as usize
    }

    pub fn d_values(&self) -> &[u8; 9] {
        &self.d
    }

    pub fn p_values(&self) -> &[u8; 27] {
        &self.p
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Positions `P(a..=b)` feeding one Boolean-function instance.
    pub fn p_range(&self, first: usize) -> [usize; 6] {
        std::array::from_fn(|k| self.p(first + k))
    }

    /// Parses `"551: P=17,4,...,27 D=0,12,...,24"`. The label and the `P=`
    /// prefix are optional; line breaks inside the lists are allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: msg.to_string() };
        let mut body = text.trim();
        let mut label = None;
        if let Some(colon) = body.find(':') {
            if !body[..colon].contains('=') {
                let l = body[..colon].trim();
                if !l.is_empty() {
                    label = Some(l.to_string());
                }
                body = body[colon + 1..].trim();
            }
        }
        let dpos = body.find("D=").ok_or_else(|| bad("missing D= list"))?;
        let p_part = body[..dpos].trim();
        let p_part = p_part.strip_prefix("P=").unwrap_or(p_part);
        let d_part = &body[dpos + 2..];
        let p = parse_list(p_part)?;
        let d = parse_list(d_part)?;
        if p.len() != 27 {
            return Err(Error::Arity { field: 'P', expected: 27, found: p.len() });
        }
        if d.len() != 9 {
            return Err(Error::Arity { field: 'D', expected: 9, found: d.len() });
        }
        let to_u8 =
            |field, index: usize, v: usize| u8::try_from(v).map_err(|_| Error::OutOfRange { field, index, value: v });
        let mut da = [0u8; 9];
        for (j, &v) in d.iter().enumerate() {
            da[j] = to_u8('D', j + 1, v)?;
        }
        let mut pa = [0u8; 27];
        for (j, &v) in p.iter().enumerate() {
            pa[j] = to_u8('P', j + 1, v)?;
        }
        Lzs::new(da, pa, label)
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim().trim_end_matches(',');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<usize>().map_err(|_| Error::Parse { pos: 0, msg: format!("bad LZS entry {t:?}") })
        })
        .collect()
}

fn join(v: &[u8]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Lzs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "{l}: ")?;
        }
        write!(f, "P={} D={}", join(&self.p), join(&self.d))
    }
}

impl std::str::FromStr for Lzs {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Lzs::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const L551: &str =
        "551: P=17,4,33,12,10,8,5,11,9,30,22,24,20,2,21,34,1,25,13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24";

    #[test]
    fn parse_551() {
        let l = Lzs::parse(L551).unwrap();
        assert_eq!(l.d(7), 20);
        assert_eq!(l.p(6), 8);
        assert_eq!(l.d(1), 0);
        assert_eq!(l.label(), Some("551"));
        assert_eq!(l.to_string(), L551);
    }

    #[test]
    fn parse_443_without_p_prefix_and_with_line_break() {
        let t =
            "443: 9,19,33,7,10,3,18,26,17,30,4,25,28,2,21,34,1,11,\n15,8,14,6,13,29,12,5,27 D=24,16,36,12,20,32,4,8,28";
        let l = Lzs::parse(t).unwrap();
        assert_eq!(l.d(1), 24);
        assert_eq!(l.p(27), 27);
        assert_eq!(Lzs::parse(&l.to_string()).unwrap(), l);
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(Lzs::parse("D=1,2"), Err(Error::Arity { field: 'P', .. })));
        let p27 = (1..=27).map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert!(matches!(
            Lzs::parse(&format!("P={p27} D=1,2")),
            Err(Error::Arity { field: 'D', expected: 9, found: 2 })
        ));
    }

    #[test]
    fn range_errors() {
        let p27 = (1..=27).map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert!(matches!(
            Lzs::parse(&format!("P={p27} D=0,1,2,3,4,5,6,7,37")),
            Err(Error::OutOfRange { field: 'D', index: 9, value: 37 })
        ));
        let mut p = [1u8; 27];
        p[3] = 0;
        assert!(matches!(Lzs::new([0; 9], p, None), Err(Error::OutOfRange { field: 'P', index: 4, .. })));
    }

    #[test]
    fn repeated_p_entries_are_allowed() {
        let t = "550: P=17,4,33,12,10,8,22,23,24,31,30,20,20,2,21,34,1,25,13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24";
        assert!(Lzs::parse(t).is_ok());
    }
}
