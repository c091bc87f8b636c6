use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, AddAssign, Mul};

use super::table;
use super::var::VarId;
use crate::error::{Error, Result};

/// A product of distinct variables; the empty product is the constant 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: VarId) -> Self {
        Monomial(v.bit())
    }

    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Monomial(vars.into_iter().fold(0, |m, v| m | v.bit()))
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, v: VarId) -> bool {
        self.0 & v.bit() != 0
    }

    pub fn vars(self) -> impl Iterator<Item = VarId> {
        bits(self.0).map(|s| VarId::from_slot(s).unwrap())
    }

    pub fn mask(self) -> u64 {
        self.0
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    // x*x = x, so the product of monomials is the union of their variables
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial(self.0 | rhs.0)
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = u8> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let s = m.trailing_zeros() as u8;
        m &= m - 1;
        Some(s)
    })
}

/// Sorts and cancels duplicate pairs in place.
fn canonicalize(terms: &mut Vec<u64>) {
    terms.sort_unstable();
    let mut out = 0;
    let mut i = 0;
    while i < terms.len() {
        let t = terms[i];
        let mut j = i + 1;
        while j < terms.len() && terms[j] == t {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            terms[out] = t;
            out += 1;
        }
        i = j;
    }
    terms.truncate(out);
}

/// A polynomial over GF(2) in algebraic normal form.
///
/// Terms are kept sorted and free of duplicates after every operation, so
/// two polynomials are equal exactly when their term lists are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BoolPoly {
    terms: Vec<u64>,
}

impl std::fmt::Debug for BoolPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BoolPoly({self})")
    }
}

impl BoolPoly {
    pub fn zero() -> Self {
        BoolPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        BoolPoly { terms: vec![0] }
    }

    pub fn constant(bit: bool) -> Self {
        if bit {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn var(v: VarId) -> Self {
        BoolPoly { terms: vec![v.bit()] }
    }

    pub fn monomial(m: Monomial) -> Self {
        BoolPoly { terms: vec![m.0] }
    }

    /// Builds a polynomial from raw monomial masks; repeated masks cancel.
    pub fn from_masks(mut terms: Vec<u64>) -> Self {
        canonicalize(&mut terms);
        BoolPoly { terms }
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(it: I) -> Self {
        Self::from_masks(it.into_iter().map(|m| m.0).collect())
    }

    /// Sum of the given variables.
    pub fn linear<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Self::from_masks(vars.into_iter().map(VarId::bit).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [0]
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || self.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = Monomial> + '_ {
        self.terms.iter().map(|&t| Monomial(t))
    }

    pub fn masks(&self) -> &[u64] {
        &self.terms
    }

    pub fn contains_term(&self, m: Monomial) -> bool {
        self.terms.binary_search(&m.0).is_ok()
    }

    /// Highest monomial degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.count_ones()).max()
    }

    /// Mask of every variable that occurs in some term.
    pub fn support(&self) -> u64 {
        self.terms.iter().fold(0, |a, &t| a | t)
    }

    pub fn vars(&self) -> Vec<VarId> {
        bits(self.support()).map(|s| VarId::from_slot(s).unwrap()).collect()
    }

    pub fn mentions(&self, v: VarId) -> bool {
        self.support() & v.bit() != 0
    }

    /// True when every term has degree at most one.
    pub fn is_affine(&self) -> bool {
        self.terms.iter().all(|t| t.count_ones() <= 1)
    }

    /// Value under a total assignment given as a bit mask of true variables.
    pub fn eval_mask(&self, values: u64) -> bool {
        self.terms.iter().filter(|&&t| t & !values == 0).count() % 2 == 1
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<bool> {
        let missing = self.support() & !assignment.defined;
        if missing != 0 {
            let v = VarId::from_slot(missing.trailing_zeros() as u8).unwrap();
            return Err(Error::Unassigned(v));
        }
        Ok(self.eval_mask(assignment.values))
    }

    /// Product with a single monomial.
    pub fn mul_monomial(&self, m: Monomial) -> BoolPoly {
        if m.0 == 0 {
            return self.clone();
        }
        Self::from_masks(self.terms.iter().map(|&t| t | m.0).collect())
    }

    /// Splits into `(q1, q0)` with `self = v*q1 + q0` and neither mentioning `v`.
    pub fn split_on(&self, v: VarId) -> (BoolPoly, BoolPoly) {
        let b = v.bit();
        let mut with = Vec::new();
        let mut without = Vec::new();
        for &t in &self.terms {
            if t & b != 0 {
                with.push(t & !b);
            } else {
                without.push(t);
            }
        }
        (BoolPoly::from_masks(with), BoolPoly { terms: without })
    }

    /// Fixes a variable to a constant.
    pub fn restrict(&self, v: VarId, value: bool) -> BoolPoly {
        let (q1, q0) = self.split_on(v);
        if value {
            q1 + q0
        } else {
            q0
        }
    }

    /// Simultaneous substitution of variables by polynomials.
    ///
    /// Every variable of `self` must have an image in `subs`.
    pub fn substitute(&self, subs: &BTreeMap<VarId, BoolPoly>) -> Result<BoolPoly> {
        let mut s = Substitution::new();
        for (&v, p) in subs {
            s.set(v, p.clone());
        }
        s.apply(self)
    }

    /// Renames variables; each variable maps to one variable.
    pub fn rename(&self, f: impl Fn(VarId) -> VarId) -> BoolPoly {
        let mut image = [0u64; 64];
        for (s, slot) in image.iter_mut().enumerate() {
            *slot = f(VarId::from_slot(s as u8).unwrap()).bit();
        }
        Self::from_masks(self.terms.iter().map(|&t| bits(t).fold(0, |m, s| m | image[s as usize])).collect())
    }

    /// True iff `p` vanishes wherever `self` vanishes, i.e. `p = self * q` for
    /// some `q` in the Boolean function ring. Checked on every point of the
    /// joint support, which is limited to 24 variables.
    pub fn divides(&self, p: &BoolPoly) -> Result<bool> {
        const LIMIT: usize = 24;
        let joint = self.support() | p.support();
        let vars: Vec<u8> = bits(joint).collect();
        if vars.len() > LIMIT {
            return Err(Error::SupportTooLarge { vars: vars.len(), limit: LIMIT });
        }
        let ta = table::truth_table(self, &vars);
        let tp = table::truth_table(p, &vars);
        Ok(tp.iter().zip(&ta).all(|(p, a)| p & !a == 0))
    }

    /// True iff no non-constant affine polynomial over the support of `self`
    /// divides it. Constants are reported as not irreducible.
    pub fn is_irreducible_no_affine_factor(&self) -> Result<bool> {
        const LIMIT: usize = 16;
        let vars: Vec<u8> = bits(self.support()).collect();
        if vars.len() > LIMIT {
            return Err(Error::SupportTooLarge { vars: vars.len(), limit: LIMIT });
        }
        if self.is_constant() {
            return Ok(false);
        }
        let tp = table::truth_table(self, &vars);
        let k = vars.len();
        for subset in 1u32..(1 << k) {
            for c in [false, true] {
                if table::affine_divides(&tp, k, subset, c) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// For a non-constant affine `a` dividing `self`, the cofactor `q` with
    /// `self = a * q` that does not mention the first variable `v` of `a`:
    /// `q = self[v <- a + v + 1]`. `None` when `a` does not divide `self`.
    pub fn quotient_by_affine(&self, a: &BoolPoly) -> Result<Option<BoolPoly>> {
        if !a.is_affine() || a.is_constant() {
            return Err(Error::Invalid(format!("{a} is not a non-constant affine polynomial")));
        }
        if !a.divides(self)? {
            return Ok(None);
        }
        let v = a.vars()[0];
        let img = a + &(BoolPoly::var(v) + BoolPoly::one());
        let (q1, q0) = self.split_on(v);
        Ok(Some(&(&img * &q1) + &q0))
    }

    /// Peels off affine factors in at most two variables (plus a constant),
    /// returning them together with the remaining cofactor.
    ///
    /// Used for display only; gives up (returning no factors) when the support
    /// is larger than 24 variables.
    pub fn affine_factors(&self) -> (Vec<BoolPoly>, BoolPoly) {
        let mut factors = Vec::new();
        let mut rest = self.clone();
        if rest.is_constant() || bits(rest.support()).count() > 24 {
            return (factors, rest);
        }
        'outer: loop {
            if rest.is_affine() || rest.len() <= 1 {
                break;
            }
            let mut vars = rest.vars();
            vars.sort_by_key(|v| super::print_key(*v));
            for (i, &v) in vars.iter().enumerate() {
                let mut cands = vec![BoolPoly::var(v), BoolPoly::var(v) + BoolPoly::one()];
                for &w in &vars[i + 1..] {
                    let s = BoolPoly::linear([v, w]);
                    cands.push(s.clone() + BoolPoly::one());
                    cands.push(s);
                }
                for a in cands {
                    if let Ok(Some(q)) = rest.quotient_by_affine(&a) {
                        rest = q;
                        factors.push(a);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if rest.is_affine() && !rest.is_constant() && !factors.is_empty() {
            factors.push(rest);
            rest = BoolPoly::one();
        }
        (factors, rest)
    }
}

/// A partial assignment of variables to bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub defined: u64,
    pub values: u64,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: VarId, bit: bool) -> &mut Self {
        self.defined |= v.bit();
        if bit {
            self.values |= v.bit();
        } else {
            self.values &= !v.bit();
        }
        self
    }

    pub fn with(mut self, v: VarId, bit: bool) -> Self {
        self.set(v, bit);
        self
    }

    pub fn get(&self, v: VarId) -> Option<bool> {
        (self.defined & v.bit() != 0).then(|| self.values & v.bit() != 0)
    }

    /// Every variable defined, with the given values.
    pub fn total(values: u64) -> Self {
        Assignment { defined: !0, values }
    }
}

/// Images of variables for [`BoolPoly`] substitution.
#[derive(Clone, Debug)]
pub struct Substitution {
    images: Vec<Option<BoolPoly>>,
}

impl Default for Substitution {
    fn default() -> Self {
        Self::new()
    }
}

impl Substitution {
    /// No variable mapped.
    pub fn new() -> Self {
        Substitution { images: vec![None; 64] }
    }

    /// Every variable mapped to itself.
    pub fn identity() -> Self {
        Substitution { images: (0..64).map(|s| Some(BoolPoly::var(VarId::from_slot(s).unwrap()))).collect() }
    }

    pub fn set(&mut self, v: VarId, image: BoolPoly) -> &mut Self {
        self.images[v.slot() as usize] = Some(image);
        self
    }

    pub fn get(&self, v: VarId) -> Option<&BoolPoly> {
        self.images[v.slot() as usize].as_ref()
    }

    /// Applies the substitution, expanding and canonicalising the result.
    ///
    /// Variables whose image is a single monomial are renamed term by term.
    /// The remaining ones are eliminated by Shannon splitting with memoised
    /// cofactors, which keeps products of sums such as `(q+i)(r+j)...`
    /// close to their factored cost.
    pub fn apply(&self, p: &BoolPoly) -> Result<BoolPoly> {
        let support = p.support();
        let mut mono_image = [0u64; 64];
        let mut kill = 0u64;
        let mut general = 0u64;
        for s in bits(support) {
            let v = VarId::from_slot(s).unwrap();
            let img = self.get(v).ok_or(Error::MissingSubstitution(v))?;
            match img.terms.as_slice() {
                [] => kill |= v.bit(),
                [m] => mono_image[s as usize] = *m,
                _ => general |= v.bit(),
            }
        }
        let mut ctx = ApplyCtx { subs: self, mono_image, kill, general, memo: HashMap::new() };
        Ok(ctx.rec(p))
    }
}

struct ApplyCtx<'a> {
    subs: &'a Substitution,
    mono_image: [u64; 64],
    kill: u64,
    general: u64,
    memo: HashMap<Vec<u64>, BoolPoly>,
}

impl ApplyCtx<'_> {
    fn rename(&self, p: &BoolPoly) -> BoolPoly {
        let terms = p
            .terms
            .iter()
            .filter(|&&t| t & self.kill == 0)
            .map(|&t| bits(t).fold(0, |m, s| m | self.mono_image[s as usize]))
            .collect();
        BoolPoly::from_masks(terms)
    }

    fn rec(&mut self, p: &BoolPoly) -> BoolPoly {
        let g = p.support() & self.general;
        if g == 0 {
            return self.rename(p);
        }
        if let Some(r) = self.memo.get(&p.terms) {
            return r.clone();
        }
        let v = VarId::from_slot(g.trailing_zeros() as u8).unwrap();
        let (q1, q0) = p.split_on(v);
        let r1 = self.rec(&q1);
        let r0 = self.rec(&q0);
        let img = self.subs.get(v).unwrap();
        let r = &(img * &r1) + &r0;
        self.memo.insert(p.terms.clone(), r.clone());
        r
    }
}

impl Add for &BoolPoly {
    type Output = BoolPoly;
    fn add(self, rhs: &BoolPoly) -> BoolPoly {
        // symmetric difference of two sorted lists
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        BoolPoly { terms: out }
    }
}

impl Add for BoolPoly {
    type Output = BoolPoly;
    fn add(self, rhs: BoolPoly) -> BoolPoly {
        &self + &rhs
    }
}

impl Add<&BoolPoly> for BoolPoly {
    type Output = BoolPoly;
    fn add(self, rhs: &BoolPoly) -> BoolPoly {
        &self + rhs
    }
}

impl AddAssign<&BoolPoly> for BoolPoly {
    fn add_assign(&mut self, rhs: &BoolPoly) {
        *self = &*self + rhs;
    }
}

impl AddAssign for BoolPoly {
    fn add_assign(&mut self, rhs: BoolPoly) {
        *self = &*self + &rhs;
    }
}

impl Mul for &BoolPoly {
    type Output = BoolPoly;
    fn mul(self, rhs: &BoolPoly) -> BoolPoly {
        if self.is_zero() || rhs.is_zero() {
            return BoolPoly::zero();
        }
        if self.terms.len() == 1 {
            return rhs.mul_monomial(Monomial(self.terms[0]));
        }
        if rhs.terms.len() == 1 {
            return self.mul_monomial(Monomial(rhs.terms[0]));
        }
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for &a in &self.terms {
            out.extend(rhs.terms.iter().map(|&b| a | b));
        }
        BoolPoly::from_masks(out)
    }
}

impl Mul for BoolPoly {
    type Output = BoolPoly;
    fn mul(self, rhs: BoolPoly) -> BoolPoly {
        &self * &rhs
    }
}

impl Mul<&BoolPoly> for BoolPoly {
    type Output = BoolPoly;
    fn mul(self, rhs: &BoolPoly) -> BoolPoly {
        &self * rhs
    }
}

impl std::iter::Sum for BoolPoly {
    fn sum<I: Iterator<Item = BoolPoly>>(iter: I) -> BoolPoly {
        BoolPoly::from_masks(iter.flat_map(|p| p.terms).collect())
    }
}

impl std::iter::Product for BoolPoly {
    fn product<I: Iterator<Item = BoolPoly>>(iter: I) -> BoolPoly {
        iter.fold(BoolPoly::one(), |a, b| &a * &b)
    }
}

impl From<VarId> for BoolPoly {
    fn from(v: VarId) -> Self {
        BoolPoly::var(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::parse;

    fn p(s: &str) -> BoolPoly {
        parse(s).unwrap()
    }

    #[test]
    fn add_cancels() {
        assert_eq!(p("a+b") + p("b+c"), p("a+c"));
        let q = p("eg+fh+abc+1");
        assert!((&q + &q).is_zero());
        assert_eq!(p("eg+fh") + p("eo+fp"), p("eg+fh+eo+fp"));
    }

    #[test]
    fn mul_is_idempotent_on_variables() {
        assert_eq!(p("a+b") * p("a+b"), p("a+b"));
        assert_eq!(p("ab") * p("bc"), p("abc"));
        assert_eq!(p("e+m") * p("g+o"), p("eg+eo+gm+mo"));
    }

    #[test]
    fn degree_of_zero_is_none() {
        assert_eq!(BoolPoly::zero().degree(), None);
        assert_eq!(BoolPoly::one().degree(), Some(0));
        assert_eq!(p("abc+d").degree(), Some(3));
    }

    #[test]
    fn evaluate_reports_unassigned() {
        let a = VarId::from_letter('a').unwrap();
        let b = VarId::from_letter('b').unwrap();
        let asg = Assignment::new().with(a, true);
        assert_eq!(p("a+b").evaluate(&asg), Err(Error::Unassigned(b)));
        assert!(!BoolPoly::zero().evaluate(&Assignment::new()).unwrap());
        let both = asg.with(b, true);
        assert!(!p("a+b").evaluate(&both).unwrap());
    }

    #[test]
    fn eval_all_ones() {
        assert!(!p("eg+fh+eo+fp+gm+hn+mo+np").eval_mask(!0));
    }

    #[test]
    fn substitute_basic() {
        let a = VarId::from_letter('a').unwrap();
        let b = VarId::from_letter('b').unwrap();
        let mut subs = BTreeMap::new();
        subs.insert(a, BoolPoly::var(b));
        assert_eq!(p("a").substitute(&subs).unwrap(), p("b"));

        let mut subs = BTreeMap::new();
        subs.insert(a, BoolPoly::var(a));
        subs.insert(b, BoolPoly::var(a));
        assert_eq!(p("ab").substitute(&subs).unwrap(), p("a"));
    }

    #[test]
    fn substitute_missing_variable() {
        let a = VarId::from_letter('a').unwrap();
        let c = VarId::from_letter('c').unwrap();
        let mut subs = BTreeMap::new();
        subs.insert(a, BoolPoly::one());
        assert_eq!(p("a+c").substitute(&subs), Err(Error::MissingSubstitution(c)));
    }

    #[test]
    fn substitute_general_images_match_pointwise() {
        let mut s = Substitution::identity();
        s.set(VarId::from_letter('a').unwrap(), p("bc+d+1"));
        s.set(VarId::from_letter('d').unwrap(), p("a+bd"));
        s.set(VarId::from_letter('e').unwrap(), BoolPoly::zero());
        let q = p("ad+abe+cd+a+1");
        let r = s.apply(&q).unwrap();
        for x in 0u64..32 {
            // letters a..e are slots 35..31
            let values = x << 31;
            let mut img = 0u64;
            for v in q.vars() {
                if s.get(v).unwrap().eval_mask(values) {
                    img |= v.bit();
                }
            }
            assert_eq!(r.eval_mask(values), q.eval_mask(img));
        }
    }

    #[test]
    fn divides_examples() {
        let abcd = p("(e+m)(f+n)(g+o)(h+p)");
        assert!(p("e+m").divides(&abcd).unwrap());
        let acbd = p("(e+m)(g+o)+(f+n)(h+p)");
        assert!(!p("e+m").divides(&acbd).unwrap());
        assert!(BoolPoly::one().divides(&acbd).unwrap());
        assert!(p("a").divides(&BoolPoly::zero()).unwrap());
    }

    #[test]
    fn divides_support_limit() {
        let big = BoolPoly::linear((1..=25).map(VarId::state));
        assert!(matches!(BoolPoly::one().divides(&big), Err(Error::SupportTooLarge { vars: 25, limit: 24 })));
    }

    #[test]
    fn factorization_is_not_unique() {
        // ab = a*b = a*(a+b+1) = b*(a+b+1)
        let ab = p("ab");
        assert_eq!(p("a") * p("b"), ab);
        assert_eq!(p("a") * p("a+b+1"), ab);
        assert_eq!(p("b") * p("a+b+1"), ab);
        for f in ["a", "b", "a+b+1"] {
            assert!(p(f).divides(&ab).unwrap());
        }
        assert!(!p("a+b").divides(&ab).unwrap());
    }

    #[test]
    fn irreducibility_examples() {
        let acbd = p("(e+m)(g+o)+(f+n)(h+p)");
        assert!(acbd.is_irreducible_no_affine_factor().unwrap());
        let abcd = p("(e+m)(f+n)(g+o)(h+p)");
        assert!(!abcd.is_irreducible_no_affine_factor().unwrap());
        assert!(!p("a").is_irreducible_no_affine_factor().unwrap());
        assert!(!BoolPoly::zero().is_irreducible_no_affine_factor().unwrap());
    }

    #[test]
    fn affine_factor_extraction() {
        let fe = p("(Y+m)(g+o)");
        let (fs, rest) = fe.affine_factors();
        assert!(rest.is_one());
        assert_eq!(fs.len(), 2);
        assert_eq!(fs.iter().cloned().product::<BoolPoly>(), fe);
        let acbd = p("(e+m)(g+o)+(f+n)(h+p)");
        let (fs, rest) = acbd.affine_factors();
        assert!(fs.is_empty());
        assert_eq!(rest, acbd);
    }
}
