//! Experiment CLI for short hybrid exponential sums over curves mod p.
//!
//! Subcommands: sweep, moments, model, auxprobe, probe. Each reads a JSON
//! config, writes deterministic artifacts under --out, and exits with
//! 0 on success, 1 on validation errors, 2 on guard violations, and 3 when
//! --check is passed and a config-declared threshold fails.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod report;
mod svg;

use commands::CmdError;

#[derive(Parser)]
#[command(name = "expcli", about = "short hybrid exponential sum experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: degeneracy probe, window series, moments,
    /// distribution tests, CSV/JSON/SVG artifacts.
    Sweep(RunArgs),
    /// Moment table (empirical vs predicted with error budgets) plus the
    /// empirical characteristic function grid.
    Moments(RunArgs),
    /// Monte Carlo model checks: exact vs sampled moments and the
    /// characteristic-function comparison.
    Model(RunArgs),
    /// Irreducibility classification histogram over sampled offset tuples
    /// and the splitting-identity residuals at guarded small parameters.
    Auxprobe(RunArgs),
    /// Degeneracy probe only.
    Probe(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: available parallelism). Results are
    /// byte-identical for any value.
    #[arg(long)]
    jobs: Option<usize>,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate the config's `checks` list against summary.json; exit 3 on
    /// any failure.
    #[arg(long, default_value_t = false)]
    check: bool,
}

type CommandFn = fn(&config::Experiment, &std::path::Path) -> Result<serde_json::Value, CmdError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&RunArgs, CommandFn) = match &cli.command {
        Command::Sweep(a) => (a, commands::cmd_sweep),
        Command::Moments(a) => (a, commands::cmd_moments),
        Command::Model(a) => (a, commands::cmd_model),
        Command::Auxprobe(a) => (a, commands::cmd_auxprobe),
        Command::Probe(a) => (a, commands::cmd_probe),
    };
    match run_command(args, run) {
        Ok(code) => code,
        Err(CmdError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CmdError::Guard(msg)) => {
            eprintln!("guard violation: {msg}");
            ExitCode::from(2)
        }
        Err(CmdError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run_command(args: &RunArgs, run: CommandFn) -> Result<ExitCode, CmdError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CmdError::Invalid(format!("cannot read {}: {e}", args.config.display())))?;
    let raw: config::RawConfig = serde_json::from_str(&text)
        .map_err(|e| CmdError::Invalid(format!("{}: {e}", args.config.display())))?;
    let exp = config::validate(raw, args.seed).map_err(|e| CmdError::Invalid(e.to_string()))?;

    for w in &exp.warnings {
        eprintln!("warning: {w}");
    }

    if let Some(jobs) = args.jobs {
        // results do not depend on the pool size; this only bounds parallelism
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CmdError::Invalid(format!("--jobs: {e}")))?;
    }

    let summary = run(&exp, &args.out)?;
    std::fs::write(args.out.join("summary.json"), report::to_string(&summary))?;

    if args.check {
        let mut failures = Vec::new();
        for check in &exp.checks {
            match report::lookup(&summary, &check.path) {
                Some(serde_json::Value::Number(n)) => {
                    let v = n.as_f64().unwrap_or(f64::NAN);
                    // NaN must fail, so test the passing direction
                    let pass = v.abs() <= check.max_abs;
                    if !pass {
                        failures.push(format!(
                            "{}: |{v:.6e}| > {:.6e}",
                            check.path, check.max_abs
                        ));
                    }
                }
                Some(other) => failures.push(format!(
                    "{}: expected a number, found {other}",
                    check.path
                )),
                None => failures.push(format!("{}: path not found in summary", check.path)),
            }
        }
        if !failures.is_empty() {
            for f in &failures {
                eprintln!("check failed: {f}");
            }
            return Ok(ExitCode::from(3));
        }
        println!("all {} checks passed", exp.checks.len());
    }
    Ok(ExitCode::SUCCESS)
}
