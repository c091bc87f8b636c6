use std::process::{Command, Output};

fn t310(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_t310")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let ok = t310(&["verify", "--fixture", "551", "--poly", "eg+eo+fh+fp+gm+hn+mo+np"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("proven"));

    let bad = t310(&["verify", "--fixture", "558", "--factors", "AC+BD"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("state"));

    assert_eq!(t310(&["verify", "--fixture", "551", "--poly", "1"]).status.code(), Some(0));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(t310(&["verify", "--fixture", "551", "--poly", "e+"]).status.code(), Some(2));
    assert_eq!(t310(&["verify", "--fixture", "999", "--poly", "e"]).status.code(), Some(2));
    assert_eq!(t310(&["verify", "--poly", "e"]).status.code(), Some(2));
    assert_eq!(t310(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(t310(&["cycle", "--fixture", "551", "--pair", "29"]).status.code(), Some(2));
    assert_eq!(t310(&["--help"]).status.code(), Some(0));
}

#[test]
fn derive_fe_local_form() {
    let o = t310(&["derive-fe", "--fixture", "551", "--factors", "AC+BD", "--local", "Y"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("(Z2+m)(g+o)"), "{s}");
    assert!(s.contains("(Z+f)(d+e)"), "{s}");

    let dropped = t310(&["derive-fe", "--fixture", "443", "--factors", "ABCD", "--local", "Y"]);
    assert!(stdout(&dropped).contains("dropping (j+r)"), "{}", stdout(&dropped));

    let concrete = t310(&["derive-fe", "--fixture", "551", "--factors", "AC+BD", "--concrete"]);
    assert!(stdout(&concrete).contains("FE = 0"));
}

#[test]
fn json_records() {
    let o = t310(&["--format", "json", "verify", "--fixture", "558", "--factors", "AC+BD"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["result"]["verdict"], "refuted");
}

#[test]
fn config_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "fixture = 551\nformat = json\n").unwrap();
    let out = dir.path().join("report.json");
    let o = t310(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "cycle", "--pair", "29,21"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&out).unwrap().trim()).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);

    // command-line flags beat the config
    let o = t310(&["--config", cfg.to_str().unwrap(), "--format", "text", "--fixture", "558", "check-theorem3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("P(10) = 25"));
}

#[test]
fn seeded_runs_repeat() {
    let args =
        ["--seed", "7", "verify", "--fixture", "558", "--factors", "AC+BD", "--trials", "50", "--trial-rounds", "8"];
    let a = t310(&args);
    let b = t310(&args);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("empirical"));
}

#[test]
fn function_tools() {
    let o = t310(&["solve-z", "--offset", "e", "--factor", "(a+b)(c+d)"]);
    assert!(stdout(&o).contains("2^-16"), "{}", stdout(&o));
    let m = t310(&["metrics-z", "--fixture", "551"]);
    assert!(stdout(&m).contains("nonlinearity 8"));
    let cnf = t310(&["export-cnf", "--fixture", "551", "--factors", "AC+BD"]);
    assert!(stdout(&cnf).contains("p cnf 64"));
}

#[test]
fn chain_and_search() {
    let chain = ["chain", "--fixture", "551", "--element", "D", "--element", "C", "--element", "B", "--element", "A"];
    assert_eq!(t310(&chain).status.code(), Some(1));
    let mut weak = chain.to_vec();
    weak.extend(["--z", "f"]);
    assert_eq!(t310(&weak).status.code(), Some(0));

    let s = t310(&["search", "--fixture", "551", "--degree", "2", "--vars", "efghmnop"]);
    assert!(stdout(&s).contains("eg+eo+fh+fp+gm+hn+mo+np"));
}

#[test]
fn quick_selftest_passes() {
    let o = t310(&["selftest", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("12 of 12"));
}
