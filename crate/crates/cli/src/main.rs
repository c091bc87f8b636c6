//! `t310`: command-line front end for the invariant toolkit.
//!
//! Exit codes: 0 proven (or success), 1 refuted, 2 input or usage error.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "t310", version, about = "Polynomial invariants of the T-310 block cipher")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// `key=value` file with defaults for fixture, lzs, z, seed, format, jobs.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Built-in wiring and function: 551, 558, 550, 443 or 444.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// Wiring such as "P=17,4,... D=0,12,..." (or @file).
    #[arg(long, global = true)]
    pub lzs: Option<String>,
    /// Boolean function as ANF over a..f or a 16-digit hex table (or @file).
    #[arg(long, global = true)]
    pub z: Option<String>,
}

/// A polynomial given as text or through the fixture's factor letters.
#[derive(Args, Debug, Clone)]
pub struct PolyArg {
    /// Polynomial in state letters, e.g. "eg+fh+eo+fp+gm+hn+mo+np".
    #[arg(long)]
    pub poly: Option<String>,
    /// Expression over the fixture's factors, e.g. "AC+BD".
    #[arg(long)]
    pub factors: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a polynomial is invariant.
    Verify {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Also run this many random encryptions.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        /// Rounds per random encryption.
        #[arg(long, default_value_t = 64)]
        trial_rounds: usize,
    },
    /// Decide whether one round shifts a chain of polynomials cyclically.
    Chain {
        /// Chain elements, e.g. --element D --element C (factor letters) or polynomials.
        #[arg(long = "element", required = true)]
        elements: Vec<String>,
    },
    /// Print the Fundamental Equation P + P(round outputs).
    DeriveFe {
        #[command(flatten)]
        poly: PolyArg,
        /// Substitute the Boolean function instead of keeping Z1..Z4.
        #[arg(long)]
        concrete: bool,
        /// Also rewrite over the inputs of one instance (Z1..Z4 or Z, Y, X, W).
        #[arg(long)]
        local: Option<String>,
    },
    /// Find every invariant over a set of variables up to a degree.
    Search {
        #[arg(long)]
        degree: u32,
        /// Letters such as "efghmnop", or "all".
        #[arg(long, default_value = "all")]
        vars: String,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
    /// Describe every Boolean function with (Z+offset)*factor = 0.
    SolveZ {
        #[arg(long)]
        offset: String,
        #[arg(long)]
        factor: String,
    },
    /// Check whether a Boolean function meets (Z+offset)*factor = 0.
    Annihilate {
        #[arg(long)]
        offset: String,
        #[arg(long)]
        factor: String,
    },
    /// Check the wiring and function hypotheses behind the AC+BD invariant.
    CheckTheorem3,
    /// Look for two states with the same round output.
    Bijective {
        #[arg(long, value_enum, default_value = "sampled")]
        mode: commands::BijMode,
        #[arg(long, default_value_t = 10_000)]
        contexts: u64,
    },
    /// Follow the shift wiring from two fresh outputs to a factor cycle.
    Cycle {
        /// Two outputs from 1, 5, ..., 33, e.g. 29,21.
        #[arg(long, value_delimiter = ',', required = true)]
        pair: Vec<usize>,
    },
    /// Weight, degree and nonlinearity of the Boolean function.
    MetricsZ,
    /// Encrypt: run rounds from a state with a 240-bit key.
    Encrypt {
        /// Nine hex digits, bit 0 = x1.
        #[arg(long)]
        state: String,
        /// Sixty hex digits.
        #[arg(long)]
        key: String,
        /// F bits as a 0/1 string, one per round.
        #[arg(long)]
        f: String,
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Search for wirings meeting constraints and invariant requirements.
    Synthesize {
        /// Such as "D(8)=P(6)" or "D(6)=32"; repeatable.
        #[arg(long = "constraint")]
        constraints: Vec<String>,
        /// Try the fixture's (or --lzs) values first.
        #[arg(long)]
        use_base: bool,
        /// Polynomials (or factor expressions with --fixture) that must be invariant.
        #[arg(long = "require")]
        required: Vec<String>,
        /// "letters:degree" searches that must find nothing, e.g. "efghmnop:2".
        #[arg(long = "forbid")]
        forbidden: Vec<String>,
        /// "offset:factor" conditions the function must meet, e.g. "f:d+e".
        #[arg(long = "annihilate")]
        annihilate: Vec<String>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 256)]
        contexts: u64,
    },
    /// Write the coefficient system of the FE in Z00..Z63 as DIMACS CNF.
    ExportCnf {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Smaller sample sizes.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
