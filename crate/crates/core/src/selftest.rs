//! The twelve acceptance checks, runnable from tests and from the command
//! line. Each check returns a short detail line on success and the reason
//! on failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::boolpoly::{anf, parse, BoolPoly, Placeholder, VarId, F, K, L};
use crate::invariant::{
    check_annihilation, empirical_check, search_invariants, solve_z, verify_chain, verify_invariant, z_metrics,
    AnnihilationCondition, InvariantSearchSpec, Verdict,
};
use crate::symbolic::{build_round_anf, fundamental_equation, instantiate};
use crate::t310::{
    check_bijective, BijectivityMode, BijectivityVerdict, CipherState, Fixture, RoundInputs, ZFunc, T310,
};

#[derive(Clone, Copy, Debug)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Random encryptions for the empirical check.
    pub trials: u64,
    /// Rounds per encryption.
    pub rounds: usize,
    /// Random inputs per fixture when comparing the two round engines.
    pub samples: u64,
    /// Sampled contexts per fixture for bijectivity.
    pub contexts: u64,
    /// Random truth tables for the transform round trip.
    pub tables: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: 1, trials: 10_000, rounds: 64, samples: 10_000, contexts: 10_000, tables: 1000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fx(name: &str) -> std::result::Result<Fixture, String> {
    Fixture::get(name).map_err(|e| e.to_string())
}

fn poly(s: &str) -> std::result::Result<BoolPoly, String> {
    parse(s).map_err(|e| e.to_string())
}

fn expand(f: &Fixture, e: &str) -> std::result::Result<BoolPoly, String> {
    f.expand(e).map_err(|e| e.to_string())
}

fn proven(f: &Fixture, e: &str) -> std::result::Result<bool, String> {
    let p = expand(f, e)?;
    Ok(verify_invariant(&p, &f.lzs, &f.z, 1).map_err(|e| e.to_string())?.is_proven())
}

/// A refutation whose witness really changes the polynomial in one round.
fn refuted_with_witness(f: &Fixture, e: &str) -> std::result::Result<String, String> {
    let p = expand(f, e)?;
    match verify_invariant(&p, &f.lzs, &f.z, 1).map_err(|e| e.to_string())? {
        Verdict::Proven => Err(format!("{e} proven on {}", f.name)),
        Verdict::Refuted(w) => {
            let out = T310::new(&f.lzs, &f.z).round(w.state, w.inputs[0]);
            ensure!(p.eval_mask(w.state.bits()) != p.eval_mask(out.bits()), "witness for {e} does not replay");
            Ok(format!("{e} refuted at state {}", w.state.to_hex()))
        }
    }
}

fn c1(o: &SelftestOptions) -> Check {
    let f = fx("551")?;
    ensure!(proven(&f, "AC+BD")?, "AC+BD not proven");
    let p = expand(&f, "AC+BD")?;
    let rep = empirical_check(&p, &f.lzs, &f.z, o.trials, o.rounds, o.seed).map_err(|e| e.to_string())?;
    ensure!(rep.violations == 0, "{} of {} runs changed AC+BD", rep.violations, rep.trials);
    Ok(format!("proven; {} runs of {} rounds without a change", o.trials, o.rounds))
}

fn c2(_: &SelftestOptions) -> Check {
    let f = fx("551")?;
    let rep = fundamental_equation(&expand(&f, "AC+BD")?, &f.lzs, None);
    ensure!(rep.fe == poly("(Z2+m)(g+o)")?, "FE is {}", rep.fe);
    ensure!(rep.survivors.is_empty(), "F, K or L survive");
    let local = rep.in_local_inputs(Placeholder::Z2).map_err(|e| e.to_string())?;
    ensure!(local == poly("(Z+f)(d+e)")?, "local form is {local}");
    Ok("FE = (Z2+m)(g+o), locally (Z+f)(d+e)".into())
}

fn c3(_: &SelftestOptions) -> Check {
    let f = fx("551")?;
    let rep = fundamental_equation(&expand(&f, "ABCD")?, &f.lzs, None);
    let want = &poly("Z2+m")? * &expand(&f, "BCD")?;
    ensure!(rep.fe == want, "FE is {}", rep.fe);
    Ok("FE = (Z2+m)BCD".into())
}

fn c4(_: &SelftestOptions) -> Check {
    let f = fx("551")?;
    let chain: Vec<BoolPoly> = "DCBA".chars().map(|c| f.factor(c).unwrap().clone()).collect();
    let proj = ZFunc::parse("f").map_err(|e| e.to_string())?;
    let weak = verify_chain(&chain, &f.lzs, &proj).map_err(|e| e.to_string())?;
    ensure!(weak.is_proven(), "chain refuted with Z=f");
    let strong = verify_chain(&chain, &f.lzs, &f.z).map_err(|e| e.to_string())?;
    ensure!(!strong.is_proven(), "chain proven with the strong Z");
    Ok("D->C->B->A->D holds for Z=f, fails for Z=1+d+e+f+de+cde+def".into())
}

fn c5(_: &SelftestOptions) -> Check {
    let f = fx("558")?;
    ensure!(proven(&f, "ABCD")?, "ABCD not proven on 558");
    refuted_with_witness(&f, "AC+BD")?;
    let vars: Vec<VarId> = "efghmnop".chars().map(|c| VarId::from_letter(c).unwrap()).collect();
    let s = search_invariants(&InvariantSearchSpec::new(vars, 3), &f.lzs, &f.z).map_err(|e| e.to_string())?;
    ensure!(s.is_empty(), "558 has {} invariants of degree <= 3", s.len());
    let g = fx("551")?;
    let lin = search_invariants(&InvariantSearchSpec::all_state(1), &g.lzs, &g.z).map_err(|e| e.to_string())?;
    ensure!(lin.is_empty(), "551 has {} linear invariants", lin.len());
    Ok("558: ABCD only, nothing of degree <= 3 over e..p; 551: no linear invariant".into())
}

fn c6(_: &SelftestOptions) -> Check {
    let f = fx("550")?;
    ensure!(proven(&f, "ABCD")?, "ABCD not proven on 550");
    let inputs = build_round_anf(&f.lzs, None).z_inputs(Placeholder::Z2).to_owned();
    let y = instantiate(&f.z, &inputs);
    let lhs = &(&y + &poly("m")?) * &poly("f+n")?;
    let r = BoolPoly::var(inputs[5]);
    let rhs = &(&(&r * &poly("nf")?) + &(&r * &poly("f")?)) * &poly("go")?;
    ensure!(lhs == rhs, "(Y+m)(f+n) = {lhs}, expected {rhs}");
    Ok(format!("ABCD proven; (Y+m)(f+n) = ({0}nf+{0}f)go", inputs[5]))
}

fn c7(_: &SelftestOptions) -> Check {
    let f = fx("443")?;
    let abcd = fundamental_equation(&expand(&f, "ABCD")?, &f.lzs, None);
    ensure!(abcd.fe == &expand(&f, "BCD")? * &poly("S+Z2")?, "ABCD FE is {}", abcd.fe);
    let efgh = fundamental_equation(&expand(&f, "EFGH")?, &f.lzs, None);
    ensure!(efgh.fe == &expand(&f, "FGH")? * &poly("y+Z4")?, "EFGH FE is {}", efgh.fe);
    for e in ["ABCD", "EFGH", "ABCDEFGH"] {
        ensure!(proven(&f, e)?, "{e} not proven on 443");
    }
    let cond = AnnihilationCondition::parse("e", "(a+b)(c+f)").map_err(|e| e.to_string())?;
    let sol = solve_z(std::slice::from_ref(&cond)).map_err(|e| e.to_string())?;
    ensure!(sol.forced.len() == 16 && sol.count() == 1 << 48, "{} forced", sol.forced.len());
    // exact count over all functions: solutions / 2^64
    let forced = (0..64).filter(|&x| cond.forced_mask() >> x & 1 == 1).count() as u32;
    let solutions = 1u128 << (64 - forced);
    ensure!(solutions << 16 == 1u128 << 64, "random-Z probability is not 2^-16");
    ensure!(check_annihilation(&f.z, &cond).holds(), "443's Z violates its condition");
    Ok("BCD(S+Z2), FGH(y+Z4); three invariants proven; 16 forced, 2^48 solutions, p = 2^-16".into())
}

fn c8(_: &SelftestOptions) -> Check {
    let f = fx("444")?;
    ensure!(proven(&f, "ABCDEFGH")?, "ABCDEFGH not proven on 444");
    let w1 = refuted_with_witness(&f, "ABCD")?;
    let w2 = refuted_with_witness(&f, "EFGH")?;
    let rep = fundamental_equation(&expand(&f, "ABCDEFGH")?, &f.lzs, None);
    let e2 = BoolPoly::var(VarId::state(f.lzs.p(11)));
    let e4 = BoolPoly::var(VarId::state(f.lzs.p(25)));
    let y = &BoolPoly::var(Placeholder::Z2.var()) + &e2;
    let w = &BoolPoly::var(Placeholder::Z4.var()) + &e4;
    let inner = &(&(&expand(&f, "E")? * &w) + &(&expand(&f, "A")? * &y)) + &(&w * &y);
    let want = &expand(&f, "BCDFGH")? * &inner;
    ensure!(rep.fe == want, "FE is {}", rep.fe);
    let cond = AnnihilationCondition::parse("e", "(a+b)(c+d)").map_err(|e| e.to_string())?;
    let sol = solve_z(&[cond]).map_err(|e| e.to_string())?;
    ensure!(sol.forced.len() == 16, "{} forced entries", sol.forced.len());
    Ok(format!("ABCDEFGH proven; {w1}; {w2}; FE matches; 16 of 64 entries forced"))
}

fn c9(_: &SelftestOptions) -> Check {
    let mut checked = 0;
    for f in Fixture::all() {
        let inv: Vec<BoolPoly> = f.invariants.iter().map(|e| expand(&f, e)).collect::<std::result::Result<_, _>>()?;
        for i in 0..inv.len() {
            for j in i..inv.len() {
                for (op, p) in [("+", &inv[i] + &inv[j]), ("*", &inv[i] * &inv[j])] {
                    let v = verify_invariant(&p, &f.lzs, &f.z, 1).map_err(|e| e.to_string())?;
                    ensure!(v.is_proven(), "{} {}{op}{} not proven", f.name, f.invariants[i], f.invariants[j]);
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} sums and products proven"))
}

fn c10(o: &SelftestOptions) -> Check {
    for f in Fixture::all() {
        let r = build_round_anf(&f.lzs, Some(&f.z));
        let c = T310::new(&f.lzs, &f.z);
        let bad = (0..o.samples).into_par_iter().find_map_any(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
            rng.set_stream(i);
            let s = CipherState::new(rng.gen());
            let ri = RoundInputs::from_bits(rng.gen());
            let vals = s.bits() | ((ri.f as u64) * F.bit()) | ((ri.k as u64) * K.bit()) | ((ri.l as u64) * L.bit());
            let y = c.round(s, ri);
            for k in 1..=36 {
                if r.output(k).eval_mask(vals) != y.get(k) {
                    return Some(format!("y{k} differs at state {}", s.to_hex()));
                }
                if k % 4 != 1 && y.get(k) != s.get(k - 1) {
                    return Some(format!("y{k} is not x{}", k - 1));
                }
            }
            None
        });
        if let Some(msg) = bad {
            return Err(format!("{}: {msg}", f.name));
        }
    }
    Ok(format!("{} inputs per fixture agree bit for bit", o.samples))
}

fn c11(o: &SelftestOptions) -> Check {
    for f in Fixture::all() {
        let c = T310::new(&f.lzs, &f.z);
        let v = check_bijective(&c, BijectivityMode::Sampled { contexts: o.contexts, seed: o.seed });
        ensure!(matches!(v, BijectivityVerdict::Evidence { .. }), "{}: {v:?}", f.name);
    }
    Ok(format!("no collision in {} contexts on any fixture", o.contexts))
}

fn c12(o: &SelftestOptions) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    for _ in 0..o.tables {
        let tt: u64 = rng.gen();
        let p = anf::anf_from_truth_table(tt);
        let back = anf::truth_table_from_anf(&p).map_err(|e| e.to_string())?;
        ensure!(back == tt, "round trip failed for {tt:016x}");
    }
    for text in ["a", "1+b", "c+d+f", "1+a+b+c+d+e+f", "0", "1"] {
        let z = ZFunc::parse(text).map_err(|e| e.to_string())?;
        ensure!(z_metrics(&z).nonlinearity == 0, "{text} has nonzero nonlinearity");
    }
    Ok(format!("{} tables round-trip; affine functions have nonlinearity 0", o.tables))
}

const CRITERIA: [(u8, &str, fn(&SelftestOptions) -> Check); 12] = [
    (1, "551 quadratic invariant", c1),
    (2, "FE string match", c2),
    (3, "degree-4 FE", c3),
    (4, "downgraded chain", c4),
    (5, "558 separation", c5),
    (6, "550 fixture", c6),
    (7, "443 two cycles", c7),
    (8, "444 degree-8", c8),
    (9, "ring closure", c9),
    (10, "engine cross-validation", c10),
    (11, "bijectivity", c11),
    (12, "Moebius/Walsh correctness", c12),
];

/// Runs one check, `id` in `1..=12`.
pub fn run_criterion(id: u8, opts: &SelftestOptions) -> Option<CriterionResult> {
    let &(id, title, f) = CRITERIA.iter().find(|c| c.0 == id)?;
    let (passed, detail) = match f(opts) {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionResult { id, title, passed, detail })
}

pub fn run_all(opts: &SelftestOptions) -> Vec<CriterionResult> {
    (1..=12).filter_map(|id| run_criterion(id, opts)).collect()
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2}. {}: {}", self.id, self.title, self.detail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_run_passes() {
        let opts = SelftestOptions { trials: 50, rounds: 16, samples: 100, contexts: 50, tables: 50, seed: 9 };
        for r in run_all(&opts) {
            assert!(r.passed, "{r}");
        }
        assert!(run_criterion(13, &opts).is_none());
    }

    #[test]
    fn literal_reading_of_550_identity_fails() {
        // the sixth input of Y is q; the printed letter R (x7) does not work
        let f = Fixture::get("550").unwrap();
        let inputs = build_round_anf(&f.lzs, None).z_inputs(Placeholder::Z2).to_owned();
        assert_eq!(inputs[5], VarId::from_letter('q').unwrap());
        let y = instantiate(&f.z, &inputs);
        let lhs = &(&y + &parse("m").unwrap()) * &parse("f+n").unwrap();
        assert_ne!(lhs, parse("(Rnf+Rf)go").unwrap());
        assert_eq!(lhs, parse("(qnf+qf)go").unwrap());
    }
}
