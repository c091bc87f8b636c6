use anyhow::{anyhow, bail, Context, Result};
use clap::ValueEnum;
use serde_json::{json, Value};

use t310::boolpoly::{format_factored, format_poly, BoolPoly, Notation, Placeholder, VarId};
use t310::invariant::{
    check_annihilation, check_theorem3, derive_cycle_factors, empirical_check, export_cnf, search_invariants, solve_z,
    synthesize_wiring, verify_chain, verify_invariant, z_metrics, AnnihilationCondition, AnnihilationVerdict,
    ChainVerdict, Constraint, EdgeKind, InvariantSearchSpec, SynthRequest, Theorem3Verdict, Verdict, Witness,
};
use t310::selftest::{run_all, SelftestOptions};
use t310::symbolic::{fundamental_equation, local_rewrite};
use t310::t310::fixtures::expand_factors;
use t310::t310::{check_bijective, BijectivityMode, BijectivityVerdict, CipherState, Key, T310};

use crate::input::{load_config, Setup};
use crate::report::{Format, Report};
use crate::{Cli, Command};

pub const PROVEN: u8 = 0;
pub const REFUTED: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BijMode {
    Sampled,
    Exhaustive,
}

fn show(p: &BoolPoly) -> String {
    format_poly(p, Notation::Indexed)
}

/// Expanded form, or just the term count when it would flood the screen.
fn long(p: &BoolPoly) -> String {
    if p.len() <= 32 {
        show(p)
    } else {
        format!("({} terms)", p.len())
    }
}

fn witness_lines(r: &mut Report, w: &Witness) {
    let inputs: Vec<String> =
        w.inputs.iter().map(|i| format!("F={} K={} L={}", i.f as u8, i.k as u8, i.l as u8)).collect();
    r.line(format!("  state  {}", w.state.to_hex()));
    r.line(format!("  inputs {}", inputs.join("; ")));
    r.line(format!("  value  {} -> {}", w.before as u8, w.after as u8));
}

fn state_vars(spec: &str) -> Result<Vec<VarId>> {
    if spec == "all" {
        return Ok((1..=36).map(VarId::state).collect());
    }
    spec.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| VarId::from_letter(c).ok_or_else(|| anyhow!("{c:?} is not a state letter")))
        .collect()
}

/// Factor expression when the fixture has factors and the text fits, else
/// a plain polynomial.
fn element(setup: &Setup, text: &str) -> Result<BoolPoly> {
    if let Some(f) = &setup.fixture {
        if let Ok(p) = expand_factors(&f.factors, text) {
            return Ok(p);
        }
    }
    Ok(t310::boolpoly::parse(text)?)
}

fn annihilation_arg(s: &str) -> Result<AnnihilationCondition> {
    let (o, f) = s.split_once(':').ok_or_else(|| anyhow!("expected offset:factor, got {s:?}"))?;
    Ok(AnnihilationCondition::parse(o, f)?)
}

pub fn run(cli: Cli) -> Result<u8> {
    let g = cli.global;
    let cfg = match &g.config {
        Some(p) => load_config(p)?,
        None => Default::default(),
    };
    let pick = |flag: &Option<String>, key: &str| flag.clone().or_else(|| cfg.get(key).cloned());
    let seed = match g.seed {
        Some(s) => s,
        None => cfg.get("seed").map(|s| s.parse()).transpose().context("seed in config")?.unwrap_or(1),
    };
    let format = match g.format {
        Some(f) => f,
        None => match cfg.get("format") {
            Some(s) => Format::from_str(s, true).map_err(|e| anyhow!("format in config: {e}"))?,
            None => Format::Text,
        },
    };
    let jobs = match g.jobs {
        Some(j) => Some(j),
        None => cfg.get("jobs").map(|s| s.parse()).transpose().context("jobs in config")?,
    };
    if let Some(n) = jobs {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let setup = Setup::resolve(
        pick(&g.fixture, "fixture").as_deref(),
        pick(&g.lzs, "lzs").as_deref(),
        pick(&g.z, "z").as_deref(),
    )?;

    let mut r = Report::new(format);
    let code = dispatch(cli.command, &setup, seed, &mut r)?;
    r.emit(g.out.as_deref()).context("writing report")?;
    Ok(code)
}

fn dispatch(cmd: Command, setup: &Setup, seed: u64, r: &mut Report) -> Result<u8> {
    let name = setup.name();
    match cmd {
        Command::Verify { poly, rounds, trials, trial_rounds } => {
            let (lzs, z) = (setup.lzs()?, setup.z()?);
            let p = setup.polynomial(poly.poly.as_deref(), poly.factors.as_deref())?;
            let v = verify_invariant(&p, lzs, z, rounds)?;
            let mut rec = json!({"command": "verify", "setup": name, "poly": show(&p), "rounds": rounds,
                "result": serde_json::to_value(&v)?});
            match &v {
                Verdict::Proven => r.line(format!("{name}: {} is invariant for {rounds} round(s): proven", show(&p))),
                Verdict::Refuted(w) => {
                    r.line(format!("{name}: {} is not invariant for {rounds} round(s): refuted", show(&p)));
                    witness_lines(r, w);
                }
            }
            let mut code = if v.is_proven() { PROVEN } else { REFUTED };
            if trials > 0 {
                let e = empirical_check(&p, lzs, z, trials, trial_rounds, seed)?;
                r.line(format!(
                    "  empirical: {} of {} runs of {} rounds changed the value",
                    e.violations, e.trials, e.rounds
                ));
                if e.violations > 0 {
                    code = REFUTED;
                }
                rec["empirical"] = serde_json::to_value(&e)?;
            }
            r.record(rec);
            Ok(code)
        }
        Command::Chain { elements } => {
            let (lzs, z) = (setup.lzs()?, setup.z()?);
            let chain: Vec<BoolPoly> = elements.iter().map(|e| element(setup, e)).collect::<Result<_>>()?;
            let v = verify_chain(&chain, lzs, z)?;
            let names = elements.join(" -> ");
            match &v {
                ChainVerdict::Proven => r.line(format!("{name}: chain {names} -> {}: proven", elements[0])),
                ChainVerdict::Refuted { link, witness } => {
                    let next = &elements[(link + 1) % elements.len()];
                    r.line(format!("{name}: chain refuted: {next} after one round is not {}", elements[*link]));
                    witness_lines(r, witness);
                }
            }
            r.record(
                json!({"command": "chain", "setup": name, "chain": elements, "result": serde_json::to_value(&v)?}),
            );
            Ok(if v.is_proven() { PROVEN } else { REFUTED })
        }
        Command::DeriveFe { poly, concrete, local } => {
            let lzs = setup.lzs()?;
            let p = setup.polynomial(poly.poly.as_deref(), poly.factors.as_deref())?;
            let z = if concrete { Some(setup.z()?) } else { None };
            let rep = fundamental_equation(&p, lzs, z);
            r.line(format!("P  = {}", long(&p)));
            r.line(format!("FE = {}", format_factored(&rep.fe, Notation::Indexed)));
            r.line(format!("   = {}", long(&rep.fe)));
            let surv = if rep.survivors.is_empty() { "none".to_string() } else { rep.survivor_names() };
            r.line(format!("F, K, L in FE: {surv}"));
            let mut rec = json!({"command": "derive-fe", "setup": name, "mode": rep.mode, "poly": show(&p),
                "fe": show(&rep.fe), "factored": format_factored(&rep.fe, Notation::Indexed), "survivors": surv});
            if let Some(which) = local {
                let ph = parse_placeholder(&which)?;
                let inputs = rep.z_inputs[ph.index()];
                let names: Vec<String> = inputs.iter().map(|v| v.to_string()).collect();
                // affine factors outside the instance's inputs are dropped
                let (factors, rest) = rep.fe.affine_factors();
                let local_var = |v: &VarId| *v == ph.var() || inputs.contains(v);
                let (kept, dropped): (Vec<BoolPoly>, Vec<BoolPoly>) =
                    factors.into_iter().partition(|f| f.vars().iter().all(local_var));
                let core = kept.into_iter().fold(rest, |acc, f| &acc * &f);
                let l = local_rewrite(&core, &inputs, ph)?;
                let text = format_factored(&l, Notation::Letters);
                if dropped.is_empty() {
                    r.line(format!("over the inputs of {ph} ({}): {text}", names.join(",")));
                } else {
                    let d: Vec<String> = dropped.iter().map(|f| format!("({})", show(f))).collect();
                    r.line(format!("over the inputs of {ph} ({}), dropping {}: {text}", names.join(","), d.join("")));
                }
                rec["local"] = json!(text);
            }
            r.record(rec);
            Ok(PROVEN)
        }
        Command::Search { degree, vars, rounds } => {
            let (lzs, z) = (setup.lzs()?, setup.z()?);
            let spec = InvariantSearchSpec::new(state_vars(&vars)?, degree).with_rounds(rounds);
            let space = search_invariants(&spec, lzs, z)?;
            r.line(format!(
                "{name}: {} unknowns, invariant space of dimension {} (constant 1 excluded)",
                spec.unknowns(),
                space.len()
            ));
            for b in space.basis() {
                r.line(format!("  {}", show(b)));
                r.record(json!({"command": "search", "setup": name, "invariant": show(b), "degree": b.degree()}));
            }
            r.record(
                json!({"command": "search", "setup": name, "dimension": space.len(), "unknowns": spec.unknowns()}),
            );
            Ok(PROVEN)
        }
        Command::SolveZ { offset, factor } => {
            let cond = AnnihilationCondition::parse(&offset, &factor)?;
            let s = solve_z(std::slice::from_ref(&cond))?;
            r.line(format!("{cond}"));
            r.line(format!("forced entries: {} of 64", s.forced.len()));
            r.line(format!("free entries:   {}", s.free_count));
            r.line(format!("solutions:      2^{} = {}", s.free_count, s.count()));
            r.line(format!("random Z meets it with probability 2^{}", s.probability_log2()));
            r.line(format!("sample: {} = {}", s.sample.hex(), s.sample));
            r.record(json!({"command": "solve-z", "condition": cond.to_string(), "forced": s.forced.len(),
                "free": s.free_count, "solutions": s.count().to_string(), "probability_log2": s.probability_log2(),
                "sample": s.sample.hex()}));
            Ok(PROVEN)
        }
        Command::Annihilate { offset, factor } => {
            let z = setup.z()?;
            let cond = AnnihilationCondition::parse(&offset, &factor)?;
            let v = check_annihilation(z, &cond);
            match v {
                AnnihilationVerdict::Holds => r.line(format!("{cond}: holds")),
                AnnihilationVerdict::Fails { input } => r.line(format!("{cond}: fails at input {input:06b} (fedcba)")),
            }
            r.record(
                json!({"command": "annihilate", "condition": cond.to_string(), "result": serde_json::to_value(v)?}),
            );
            Ok(if v.holds() { PROVEN } else { REFUTED })
        }
        Command::CheckTheorem3 => {
            let v = check_theorem3(setup.lzs()?, setup.z()?)?;
            r.record(json!({"command": "check-theorem3", "setup": name, "result": serde_json::to_value(&v)?}));
            match &v {
                Theorem3Verdict::HypothesesMetAndInvariant => {
                    r.line(format!("{name}: hypotheses met; AC+BD proven invariant"));
                    Ok(PROVEN)
                }
                Theorem3Verdict::HypothesesUnmet { failures } => {
                    r.line(format!("{name}: hypotheses unmet"));
                    for f in failures {
                        r.line(format!("  {f}"));
                    }
                    Ok(REFUTED)
                }
                Theorem3Verdict::HypothesesMetButViolated { witness } => {
                    r.line(format!("{name}: hypotheses met but AC+BD changes; this is a bug"));
                    witness_lines(r, witness);
                    Ok(2)
                }
            }
        }
        Command::Bijective { mode, contexts } => {
            let c = T310::new(setup.lzs()?, setup.z()?);
            let m = match mode {
                BijMode::Sampled => BijectivityMode::Sampled { contexts, seed },
                BijMode::Exhaustive => BijectivityMode::Exhaustive,
            };
            let v = check_bijective(&c, m);
            let (code, text, rec) = match v {
                BijectivityVerdict::Proven => {
                    (PROVEN, "bijective (all 2^30 contexts)".to_string(), json!({"verdict": "proven"}))
                }
                BijectivityVerdict::Evidence { contexts } => (
                    PROVEN,
                    format!("no collision in {contexts} sampled contexts"),
                    json!({"verdict": "evidence", "contexts": contexts}),
                ),
                BijectivityVerdict::NonBijective(col) => (
                    REFUTED,
                    format!(
                        "not bijective: {} and {} collide under F={} K={} L={}",
                        col.first.to_hex(),
                        col.second.to_hex(),
                        col.inputs.f as u8,
                        col.inputs.k as u8,
                        col.inputs.l as u8
                    ),
                    json!({"verdict": "refuted", "collision": serde_json::to_value(col)?}),
                ),
            };
            r.line(format!("{name}: {text}"));
            r.record(json!({"command": "bijective", "setup": name, "result": rec}));
            Ok(code)
        }
        Command::Cycle { pair } => {
            if pair.len() != 2 {
                bail!("--pair takes two outputs, e.g. 29,21");
            }
            let c = derive_cycle_factors(setup.lzs()?, (pair[0], pair[1]))?;
            for l in c.describe('A') {
                r.line(l);
            }
            let edges: Vec<Value> = c
                .edges
                .iter()
                .map(|e| match &e.kind {
                    EdgeKind::TrivialShift => json!({"from": e.from, "to": e.to, "kind": "shift"}),
                    EdgeKind::ZPerturbed { placeholder, offset } => json!({"from": e.from, "to": e.to,
                        "kind": "perturbed", "placeholder": placeholder.to_string(), "offset": show(offset)}),
                })
                .collect();
            let factors: Vec<String> = c.factors.iter().map(show).collect();
            r.record(json!({"command": "cycle", "setup": name, "factors": factors, "edges": edges}));
            Ok(PROVEN)
        }
        Command::MetricsZ => {
            let z = setup.z()?;
            let m = z_metrics(z);
            r.line(format!("Z = {z}"));
            r.line(format!("table        {}", z.hex()));
            r.line(format!("weight       {}", m.weight));
            r.line(format!("degree       {}", m.degree));
            r.line(format!("nonlinearity {}", m.nonlinearity));
            r.record(json!({"command": "metrics-z", "anf": z.to_string(), "table": z.hex(), "metrics": serde_json::to_value(m)?}));
            Ok(PROVEN)
        }
        Command::Encrypt { state, key, f, rounds } => {
            let c = T310::new(setup.lzs()?, setup.z()?);
            let s = CipherState::from_hex(&state)?;
            let k = Key::from_hex(&key)?;
            let bits: Vec<bool> = f
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(anyhow!("F bits must be 0 or 1, got {c:?}")),
                })
                .collect::<Result<_>>()?;
            let n = rounds.unwrap_or(bits.len());
            let out = c.encrypt(s, &k, &bits, n)?;
            r.line(out.to_hex());
            r.record(json!({"command": "encrypt", "setup": name, "rounds": n, "state": out.to_hex()}));
            Ok(PROVEN)
        }
        Command::Synthesize { constraints, use_base, required, forbidden, annihilate, count, budget, contexts } => {
            let mut req =
                SynthRequest::new(constraints.iter().map(|c| c.parse::<Constraint>()).collect::<t310::Result<_>>()?);
            if use_base {
                req.base = Some(setup.lzs()?.clone());
            }
            req.z = setup.z.clone();
            req.annihilation = annihilate.iter().map(|a| annihilation_arg(a)).collect::<Result<_>>()?;
            req.required = required.iter().map(|e| element(setup, e)).collect::<Result<_>>()?;
            req.forbidden = forbidden
                .iter()
                .map(|s| {
                    let (v, d) = s.split_once(':').ok_or_else(|| anyhow!("expected letters:degree, got {s:?}"))?;
                    Ok(InvariantSearchSpec::new(state_vars(v)?, d.trim().parse().context("degree")?))
                })
                .collect::<Result<_>>()?;
            req.seed = seed;
            req.want = count;
            req.budget = budget;
            req.bijectivity_contexts = contexts;
            let found = synthesize_wiring(&req)?;
            for (i, l) in found.iter().enumerate() {
                r.line(format!("{}: {l}", i + 1));
                r.record(json!({"command": "synthesize", "index": i + 1, "lzs": l.to_string()}));
            }
            Ok(PROVEN)
        }
        Command::ExportCnf { poly } => {
            let p = setup.polynomial(poly.poly.as_deref(), poly.factors.as_deref())?;
            let cnf = export_cnf(&p, setup.lzs()?)?;
            for l in cnf.to_dimacs().lines() {
                r.line(l);
            }
            r.record(json!({"command": "export-cnf", "setup": name, "poly": show(&p), "variables": cnf.num_vars(),
                "clauses": cnf.clauses().len(), "equations": cnf.equation_count()}));
            Ok(PROVEN)
        }
        Command::Selftest { quick } => {
            let mut opts = if quick {
                SelftestOptions { trials: 200, rounds: 32, samples: 500, contexts: 200, tables: 200, seed }
            } else {
                SelftestOptions::default()
            };
            opts.seed = seed;
            let results = run_all(&opts);
            for c in &results {
                r.line(c.to_string());
                r.record(serde_json::to_value(c)?);
            }
            let passed = results.iter().filter(|c| c.passed).count();
            r.line(format!("{passed} of {} criteria passed", results.len()));
            Ok(if passed == results.len() { PROVEN } else { REFUTED })
        }
    }
}

fn parse_placeholder(s: &str) -> Result<Placeholder> {
    let ph = match s {
        "Z1" | "Z" => Placeholder::Z1,
        "Z2" | "Y" => Placeholder::Z2,
        "Z3" | "X" => Placeholder::Z3,
        "Z4" | "W" => Placeholder::Z4,
        _ => bail!("unknown Boolean-function instance {s:?}; use Z1..Z4 or Z, Y, X, W"),
    };
    Ok(ph)
}
