//! `abvar`: command-line front end to the `abvar` library.
//!
//! Exit codes: 0 pass, 1 validation/domain/orientation error (including
//! bad flags and unreadable input), 2 numeric or internal error, 3
//! uncertified result under `--require-certified`, 4 a check that ran but
//! failed.

mod commands;
mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use abvar::error::{Error, Result};
use abvar::selftest::Suite;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{GroupChoice, Settings};
use report::{error_json, report_json, report_text, Status};

#[derive(Parser, Debug)]
#[command(name = "abvar", version, about = "Siegel reduction, theta embeddings and isogenies of polarized complex tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    prec_bits: u32,
    /// Target absolute accuracy of theta evaluations.
    #[arg(long, global = true, default_value_t = 1e-20)]
    eps: f64,
    /// Tolerance for symmetry, membership and residual checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Theta level.
    #[arg(long, global = true, default_value_t = 16)]
    l: u64,
    /// Expected genus; rejects inputs of another size.
    #[arg(long, global = true)]
    g: Option<usize>,
    /// Isogeny degree for `enumerate`.
    #[arg(long = "D", global = true)]
    d: Option<u64>,
    /// Group for `reduce`.
    #[arg(long, global = true, value_enum, default_value_t = Group::Sp)]
    group: Group,
    /// Input file (JSON); standard input when omitted.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for theta coordinates and enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Exit with code 3 when a result is not certified.
    #[arg(long, global = true)]
    require_certified: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a point of the Siegel upper half space.
    Reduce,
    /// Factor an integer matrix as a symplectic matrix times an integer matrix.
    Decompose,
    /// Evaluate theta functions with rational characteristics.
    ThetaEval,
    /// Evaluate the level-l projective embedding.
    Embed,
    /// Build an isogeny from its rational representation and report its invariants.
    Isogeny,
    /// List the degree-D isogenies out of a genus-one torus.
    Enumerate,
    /// Check an orbit witness.
    WitnessCheck,
    /// Run the acceptance suites.
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reduce => "reduce",
            Command::Decompose => "decompose",
            Command::ThetaEval => "theta-eval",
            Command::Embed => "embed",
            Command::Isogeny => "isogeny",
            Command::Enumerate => "enumerate",
            Command::WitnessCheck => "witness-check",
            Command::Selftest { .. } => "selftest",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    Sp,
    #[value(name = "g_l2l")]
    GL2l,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn validate(cli: &Cli) -> Result<Settings> {
    let bad = |m: String| Err(Error::Validation(m));
    if !(32..=1 << 16).contains(&cli.prec_bits) {
        return bad(format!("--prec-bits must lie in [32, 65536], got {}", cli.prec_bits));
    }
    if !(cli.eps > 0.0 && cli.eps < 1.0) {
        return bad(format!("--eps must lie in (0, 1), got {}", cli.eps));
    }
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return bad(format!("--tol must lie in (0, 1), got {}", cli.tol));
    }
    if cli.l < 2 || !cli.l.is_multiple_of(2) {
        return bad(format!("--l must be even and at least 2, got {}", cli.l));
    }
    if cli.g == Some(0) {
        return bad("--g must be positive".into());
    }
    if cli.jobs == 0 {
        return bad("--jobs must be positive".into());
    }
    match (&cli.command, cli.d) {
        (Command::Enumerate, None) => return bad("enumerate needs --D".into()),
        (_, Some(0)) => return bad("--D must be positive".into()),
        _ => {}
    }
    if let Command::Selftest { suite, .. } = &cli.command {
        suite.parse::<Suite>()?;
    }
    Ok(Settings { prec: cli.prec_bits, eps: cli.eps, tol: cli.tol, l: cli.l, g: cli.g })
}

fn read_input(path: &Option<PathBuf>) -> Result<Value> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Validation(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Validation(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("input is not valid JSON: {e}")))
}

fn dispatch(cli: &Cli, s: &Settings, input: &Value) -> Result<report::Outcome> {
    match &cli.command {
        Command::Reduce => {
            let group = match cli.group {
                Group::Sp => GroupChoice::Full,
                Group::GL2l => GroupChoice::Congruence,
            };
            commands::reduce(input, s, group)
        }
        Command::Decompose => commands::decompose(input),
        Command::ThetaEval => commands::theta_eval_cmd(input, s),
        Command::Embed => commands::embed(input, s),
        Command::Isogeny => commands::isogeny(input, s),
        Command::Enumerate => commands::enumerate(input, s, cli.d.expect("validated")),
        Command::WitnessCheck => commands::witness_check(input, s),
        Command::Selftest { suite, seed } => commands::selftest(suite.parse()?, *seed),
    }
}

fn provenance(cli: &Cli, input: &Value) -> Value {
    json!({
        "command": cli.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "precision_bits": cli.prec_bits,
        "eps": format!("{:e}", cli.eps),
        "tol": format!("{:e}", cli.tol),
        "l": cli.l,
        "input": input,
    })
}

fn emit(cli: &Cli, report: &Value) -> Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Text => report_text(report),
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> i32 {
    let mut input = Value::Null;
    let result = (|| {
        let settings = validate(cli)?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        if !matches!(cli.command, Command::Selftest { .. }) {
            input = read_input(&cli.input)?;
        }
        dispatch(cli, &settings, &input)
    })();
    match result {
        Ok(outcome) => {
            let report = report_json(&outcome, provenance(cli, &input));
            if let Err(e) = emit(cli, &report) {
                eprintln!("abvar: {e}");
                return e.exit_code();
            }
            match outcome.status {
                Status::Pass => 0,
                Status::Uncertified if cli.require_certified => 3,
                Status::Uncertified => 0,
                Status::Fail => 4,
            }
        }
        Err(e) => {
            eprintln!("abvar: {e}");
            let msg = e.to_string();
            let _ = emit(cli, &error_json(e.category(), &msg, provenance(cli, &input)));
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(&cli) as u8)
}
