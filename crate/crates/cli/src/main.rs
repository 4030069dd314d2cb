//! Command-line front end: verification suites, group reports, exact and
//! numerical period computation, and walk-trace export.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
//! 3 element ceiling exceeded during closure, 4 I/O error.

mod verify;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use grover_walk::group::ClosureError;
use grover_walk::sim::{
    default_max_steps, detect_period, seeded_rng, simulate, AmplitudeState, WalkTrace,
    DEFAULT_TOL, DEFAULT_TRIALS,
};
use grover_walk::walk_group::{exact_walk_group, monomial_walk_group, GroupReport};

use verify::{run_verify, EnginePlan};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE_LIMIT: u8 = 3;
const EXIT_IO: u8 = 4;

/// The exact matrix backend enumerates dense cyclotomic matrices; past this
/// n the closure no longer fits in desk-scale memory.
const EXACT_ENGINE_MAX_N: u64 = 8;

/// Random words sampled for the cross-engine agreement check in `verify`.
const VERIFY_WORD_SAMPLE: usize = 200;

#[derive(Parser)]
#[command(
    name = "grover-walk",
    version,
    about = "Exact group-structure verification and simulation of the Grover walk on complete graphs with self-loops"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification suite for one n and emit a JSON report.
    Verify(VerifyArgs),
    /// Compute the walk period exactly and/or detect it numerically.
    Period(PeriodArgs),
    /// Simulate the walk and export per-vertex probability traces as CSV.
    Simulate(SimulateArgs),
    /// Emit a JSON report of the group orders, quotient structure, and
    /// membership facts.
    Group(GroupArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Signed-shift normal form in the Fourier basis (fast).
    Monomial,
    /// Dense cyclotomic matrices in the original basis (slow oracle, n <= 8).
    Exact,
    /// Run both engines and cross-check them.
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of vertices (2..=32).
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=32))]
    n: u64,
    /// Engine selection; `monomial` still cross-runs both engines for
    /// n <= 8.
    #[arg(long, value_enum, default_value_t = Engine::Monomial)]
    engine: Engine,
    /// Seed for the random-word agreement sample.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Report destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Abort closures that exceed this many elements.
    #[arg(long, default_value_t = grover_walk::walk_group::DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
    /// Report format (only json).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct PeriodArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=32))]
    n: u64,
    /// exact = group-theoretic minimal exponent; float = numerical return
    /// detection.
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    /// Backend for the exact mode.
    #[arg(long, value_enum, default_value_t = Engine::Monomial)]
    engine: Engine,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = grover_walk::walk_group::DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=32))]
    n: u64,
    /// Number of evolution steps (the trace has steps + 1 rows per vertex).
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=10_000))]
    steps: u64,
    /// Initial state: uniform, vertex:<j> (1-based), or random.
    #[arg(long, default_value = "uniform", value_parser = parse_init)]
    init: InitSpec,
    /// Seed for the random initial state.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Probability trace destination (stdout when omitted);
    /// columns t,vertex,probability.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional amplitude trace destination; columns t,index,re,im.
    #[arg(long)]
    amp_out: Option<PathBuf>,
    /// Trace format (only csv).
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=32))]
    n: u64,
    /// Backend (monomial or exact; `both` is not meaningful for a single
    /// report).
    #[arg(long, value_enum, default_value_t = Engine::Monomial)]
    engine: Engine,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = grover_walk::walk_group::DEFAULT_MAX_ELEMENTS)]
    max_elements: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum InitSpec {
    Uniform,
    Random,
    /// 1-based vertex index.
    Vertex(usize),
}

fn parse_init(s: &str) -> Result<InitSpec, String> {
    match s {
        "uniform" => Ok(InitSpec::Uniform),
        "random" => Ok(InitSpec::Random),
        other => match other.strip_prefix("vertex:") {
            Some(index) => index
                .parse::<usize>()
                .ok()
                .filter(|&j| j >= 1)
                .map(InitSpec::Vertex)
                .ok_or_else(|| format!("invalid vertex index '{index}' (expected 1-based integer)")),
            None => Err(format!(
                "invalid init spec '{other}' (expected uniform, random, or vertex:<j>)"
            )),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Period(args) => cmd_period(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Group(args) => cmd_group(args),
    };
    ExitCode::from(code)
}

fn usage_error(message: &str) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn resource_error(err: &ClosureError) -> u8 {
    eprintln!("error: {err} (raise --max-elements to continue)");
    EXIT_RESOURCE_LIMIT
}

fn write_text(out: &Option<PathBuf>, content: &str) -> Result<(), u8> {
    match out {
        Some(path) => fs::write(path, content).map_err(|err| {
            eprintln!("error: cannot write {}: {err}", path.display());
            EXIT_IO
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn require_exact_range(n: u64) -> Result<(), u8> {
    if n > EXACT_ENGINE_MAX_N {
        Err(usage_error(&format!(
            "the exact engine supports n <= {EXACT_ENGINE_MAX_N} (got n = {n}); use --engine monomial"
        )))
    } else {
        Ok(())
    }
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    if args.format != Format::Json {
        return usage_error("verification reports support only --format json");
    }
    let plan = match args.engine {
        Engine::Monomial if args.n <= EXACT_ENGINE_MAX_N => EnginePlan::Both,
        Engine::Monomial => EnginePlan::MonomialOnly,
        Engine::Exact => EnginePlan::ExactOnly,
        Engine::Both => EnginePlan::Both,
    };
    if matches!(plan, EnginePlan::ExactOnly | EnginePlan::Both) {
        if let Err(code) = require_exact_range(args.n) {
            return code;
        }
    }
    let report = match run_verify(args.n, plan, args.seed, args.max_elements, VERIFY_WORD_SAMPLE) {
        Ok(report) => report,
        Err(err) => return resource_error(&err),
    };
    if args.out.is_some() {
        for check in &report.checks {
            println!(
                "{}: {} ({})",
                check.name,
                if check.passed { "pass" } else { "FAIL" },
                check.details
            );
        }
    }
    if let Err(code) = write_text(&args.out, &to_json(&report)) {
        return code;
    }
    if report.all_passed {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct PeriodReport {
    schema_version: u32,
    n: u64,
    mode: String,
    engine: String,
    seed: u64,
    expected: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    float: Option<Option<u64>>,
    passed: bool,
}

fn cmd_period(args: PeriodArgs) -> u8 {
    let n = args.n;
    let expected = 2 * n;
    let run_exact = matches!(args.mode, Mode::Exact | Mode::Both);
    let run_float = matches!(args.mode, Mode::Float | Mode::Both);

    let exact = if run_exact {
        let value = match args.engine {
            Engine::Monomial => match monomial_walk_group(n, args.max_elements) {
                Ok(wg) => wg.minimal_common_exponent(),
                Err(err) => return resource_error(&err),
            },
            Engine::Exact => {
                if let Err(code) = require_exact_range(n) {
                    return code;
                }
                match exact_walk_group(n, args.max_elements) {
                    Ok(wg) => wg.minimal_common_exponent(),
                    Err(err) => return resource_error(&err),
                }
            }
            Engine::Both => {
                return usage_error("period supports --engine monomial or exact, not both")
            }
        };
        println!("exact: {value}");
        Some(value)
    } else {
        None
    };

    let float = if run_float {
        let dim = n as usize;
        let detected = detect_period(dim, DEFAULT_TRIALS, default_max_steps(dim), DEFAULT_TOL, args.seed)
            .map(|p| p as u64);
        match detected {
            Some(value) => println!("float: {value}"),
            None => println!("float: none"),
        }
        Some(detected)
    } else {
        None
    };

    let exact_ok = exact.is_none_or(|value| value == expected);
    let float_ok = float.is_none_or(|value| value == Some(expected));
    let passed = exact_ok && float_ok;

    let report = PeriodReport {
        schema_version: 1,
        n,
        mode: match args.mode {
            Mode::Exact => "exact".to_string(),
            Mode::Float => "float".to_string(),
            Mode::Both => "both".to_string(),
        },
        engine: match args.engine {
            Engine::Monomial => "monomial".to_string(),
            Engine::Exact => "exact".to_string(),
            Engine::Both => "both".to_string(),
        },
        seed: args.seed,
        expected,
        exact,
        float,
        passed,
    };
    if args.out.is_some() {
        if let Err(code) = write_text(&args.out, &to_json(&report)) {
            return code;
        }
    }
    if passed {
        0
    } else {
        eprintln!("error: period mismatch (expected {expected})");
        EXIT_CHECK_FAILED
    }
}

fn probability_csv(trace: &WalkTrace) -> String {
    let mut csv = String::from("t,vertex,probability\n");
    for (t, probs) in trace.probabilities.iter().enumerate() {
        for (vertex, p) in probs.iter().enumerate() {
            // vertices are reported 1-based, matching v_1 ... v_n
            let _ = writeln!(csv, "{t},{},{p}", vertex + 1);
        }
    }
    csv
}

fn amplitude_csv(trace: &WalkTrace) -> String {
    let mut csv = String::from("t,index,re,im\n");
    for (t, state) in trace.states.iter().enumerate() {
        for (index, amp) in state.amplitudes().iter().enumerate() {
            let _ = writeln!(csv, "{t},{index},{},{}", amp.re, amp.im);
        }
    }
    csv
}

fn cmd_simulate(args: SimulateArgs) -> u8 {
    if args.format != Format::Csv {
        return usage_error("walk traces support only --format csv");
    }
    let n = args.n as usize;
    let initial = match &args.init {
        InitSpec::Uniform => AmplitudeState::uniform(n),
        InitSpec::Random => {
            eprintln!("seed: {}", args.seed);
            AmplitudeState::random(n, &mut seeded_rng(args.seed))
        }
        InitSpec::Vertex(j) => match AmplitudeState::vertex(n, j - 1) {
            Ok(state) => state,
            Err(_) => {
                return usage_error(&format!(
                    "vertex index {j} out of range (valid: 1..={n})"
                ))
            }
        },
    };
    let mut trace = match simulate(n, &initial, args.steps as usize) {
        Ok(trace) => trace,
        Err(err) => return usage_error(&err.to_string()),
    };
    if matches!(args.init, InitSpec::Random) {
        trace.seed = Some(args.seed);
    }
    if let Err(code) = write_text(&args.out, &probability_csv(&trace)) {
        return code;
    }
    if args.amp_out.is_some() {
        if let Err(code) = write_text(&args.amp_out, &amplitude_csv(&trace)) {
            return code;
        }
    }
    0
}

fn cmd_group(args: GroupArgs) -> u8 {
    if args.format != Format::Json {
        return usage_error("group reports support only --format json");
    }
    let (report, theorems_hold): (GroupReport, bool) = match args.engine {
        Engine::Monomial => match monomial_walk_group(args.n, args.max_elements) {
            Ok(wg) => match wg.report("monomial") {
                Ok(report) => (report, wg.theorems_hold()),
                Err(err) => {
                    eprintln!("error: {err}");
                    return EXIT_CHECK_FAILED;
                }
            },
            Err(err) => return resource_error(&err),
        },
        Engine::Exact => {
            if let Err(code) = require_exact_range(args.n) {
                return code;
            }
            match exact_walk_group(args.n, args.max_elements) {
                Ok(wg) => match wg.report("exact") {
                    Ok(report) => (report, wg.theorems_hold()),
                    Err(err) => {
                        eprintln!("error: {err}");
                        return EXIT_CHECK_FAILED;
                    }
                },
                Err(err) => return resource_error(&err),
            }
        }
        Engine::Both => {
            return usage_error("group supports --engine monomial or exact, not both")
        }
    };
    if let Err(code) = write_text(&args.out, &to_json(&report)) {
        return code;
    }
    if theorems_hold {
        0
    } else {
        eprintln!("error: report is inconsistent with the expected group structure");
        EXIT_CHECK_FAILED
    }
}
