//! `kphi`: batch front end for the reduction, homology and van Kampen tools.
//!
//! Standard output carries exactly one JSON report per run; diagnostics go to
//! standard error. Exit codes: 0 success, 1 usage, 2 parse or I/O, 3
//! precondition violation, 4 invariant failure.

mod commands;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "KPHI_THREADS";

#[derive(Parser, Debug)]
#[command(name = "kphi", version, about = "3-CNF to simplicial complex reduction and van Kampen invariants")]
pub struct Cli {
    /// Include wall-clock time in the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build K(Phi) from a DIMACS formula and write it as a JSON complex.
    Reduce(ReduceArgs),
    /// Emit the complex F, a clause gadget G, or the torus.
    Gadget(GadgetArgs),
    /// f-vector, dimension, marks and Euler characteristic of a complex.
    Stats(FileArg),
    /// Mod-2 Betti numbers of a complex or one of its marks.
    Homology(HomologyArgs),
    /// Cell counts, homology and involution check of the deleted product.
    DeletedProduct(DeletedProductArgs),
    /// Van Kampen number of a linear generic map.
    Vk(VkArgs),
    /// Check the extension-parity condition.
    CheckParity(ParityArgs),
    /// Mod-2 linking number of two marked cycles.
    Lk2(Lk2Args),
    /// Exhaustive satisfiability check of a DIMACS formula.
    Sat(SatArgs),
    /// Run the built-in invariant fixtures.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ReduceArgs {
    /// DIMACS CNF input.
    #[arg(long)]
    pub cnf: String,
    #[arg(long)]
    pub k: usize,
    /// Defaults to k/2, which requires even k.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Output path for the JSON complex.
    #[arg(short = 'o', long = "out")]
    pub out: String,
    /// Require k = 2 ell.
    #[arg(long)]
    pub theorem_regime: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
pub enum GadgetKind {
    #[value(name = "F", alias = "f")]
    F,
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "torus")]
    Torus,
}

#[derive(Args, Debug, Serialize)]
pub struct GadgetArgs {
    #[arg(value_enum)]
    pub kind: GadgetKind,
    /// Required for F and G.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub ell: usize,
    /// Number of removed simplices for G.
    #[arg(long, default_value_t = 3)]
    pub width: usize,
    /// Write the complex here instead of embedding it in the report.
    #[arg(short = 'o', long = "out")]
    pub out: Option<String>,
    #[arg(long)]
    pub theorem_regime: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct FileArg {
    /// JSON complex.
    pub file: String,
}

#[derive(Args, Debug, Serialize)]
pub struct HomologyArgs {
    pub file: String,
    /// Compute the homology of this mark's closure.
    #[arg(long)]
    pub subcomplex: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct DeletedProductArgs {
    pub file: String,
    #[arg(long)]
    pub betti: bool,
    /// Only build cells of dimension at most this.
    #[arg(long)]
    pub max_dim: Option<usize>,
}

#[derive(Args, Debug, Serialize, Clone, Copy)]
#[group(multiple = false)]
pub struct CoordSource {
    /// Seeded pseudorandom integer coordinates.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Moment-curve coordinates (the default).
    #[arg(long)]
    pub moment: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct VkArgs {
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub dim: usize,
    #[command(flatten)]
    pub coords: CoordSource,
    /// Include every crossing pair.
    #[arg(long)]
    pub ledger: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ParityArgs {
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub dim: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct Lk2Args {
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub dim: usize,
    /// Mark holding the first cycle.
    #[arg(long)]
    pub a: String,
    /// Mark holding the second cycle.
    #[arg(long)]
    pub b: String,
    #[command(flatten)]
    pub coords: CoordSource,
    /// Seed for the cone apex; defaults to the coordinate seed, or 0.
    #[arg(long)]
    pub apex_seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
pub struct SatArgs {
    pub file: String,
    #[arg(long, default_value_t = kphi_core::DEFAULT_MAX_SAT_VARS)]
    pub max_sat_vars: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Gadgets,
    Torus,
    Vk,
    All,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
}

/// A failed run, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Precondition(String),
    Invariant(String),
    /// Invariant failure with the partial results that detected it.
    FailedChecks(String, Value),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Invariant(_) | Failure::FailedChecks(..) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "input",
            Failure::Precondition(_) => "precondition",
            Failure::Invariant(_) | Failure::FailedChecks(..) => "invariant",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Input(m)
            | Failure::Precondition(m)
            | Failure::Invariant(m)
            | Failure::FailedChecks(m, _) => m,
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    subcommand: &'a str,
    parameters: Value,
    results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_ms: Option<f64>,
    exit_code: u8,
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Reduce(_) => "reduce",
        Command::Gadget(_) => "gadget",
        Command::Stats(_) => "stats",
        Command::Homology(_) => "homology",
        Command::DeletedProduct(_) => "deleted-product",
        Command::Vk(_) => "vk",
        Command::CheckParity(_) => "check-parity",
        Command::Lk2(_) => "lk2",
        Command::Sat(_) => "sat",
        Command::Verify(_) => "verify",
    }
}

fn parameters(c: &Command) -> Value {
    let v = match c {
        Command::Reduce(a) => serde_json::to_value(a),
        Command::Gadget(a) => serde_json::to_value(a),
        Command::Stats(a) => serde_json::to_value(a),
        Command::Homology(a) => serde_json::to_value(a),
        Command::DeletedProduct(a) => serde_json::to_value(a),
        Command::Vk(a) => serde_json::to_value(a),
        Command::CheckParity(a) => serde_json::to_value(a),
        Command::Lk2(a) => serde_json::to_value(a),
        Command::Sat(a) => serde_json::to_value(a),
        Command::Verify(a) => serde_json::to_value(a),
    };
    v.expect("arguments serialize")
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Invariant(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            // help and version go to stdout, usage errors to stderr
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = subcommand_name(&cli.command);
    let start = Instant::now();
    let outcome = configure_threads().and_then(|()| commands::run(&cli.command));
    let elapsed = start.elapsed();
    let (results, error, exit_code) = match outcome {
        Ok(results) => (results, None, 0),
        Err(f) => {
            eprintln!("kphi {name}: {} error: {}", f.kind(), f.message());
            let err = serde_json::json!({ "kind": f.kind(), "message": f.message() });
            let code = f.code();
            let partial = match f {
                Failure::FailedChecks(_, v) => v,
                _ => Value::Object(Default::default()),
            };
            (partial, Some(err), code)
        }
    };
    eprintln!("kphi {name}: finished in {:.3} ms", elapsed.as_secs_f64() * 1e3);
    let report = RunReport {
        subcommand: name,
        parameters: parameters(&cli.command),
        results,
        error,
        wall_clock_ms: cli.timing.then_some(elapsed.as_secs_f64() * 1e3),
        exit_code,
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    ExitCode::from(exit_code)
}
