use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use matchdist_cli::report::Format;
use matchdist_cli::run::{
    run_exact, run_sample, run_sweep, ExactConfig, RunError, SampleConfig, SweepConfig,
    EXIT_VALIDATION,
};
use matchdist_cli::templates::Template;

/// Joint laws of matching/subgraph intersections: exact tables, Monte Carlo
/// estimates, and convergence sweeps. Total variation columns use the
/// convention sum_k |P(k) - Q(k)| without the 1/2 factor.
#[derive(Parser)]
#[command(name = "matchdist", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact joint PMF, Poisson reference, total variation, and the
    /// coefficient-level bound for one model file.
    Exact {
        /// Model JSON: {"host": {...}, "families": [...]}.
        #[arg(long)]
        model: PathBuf,
        /// Use the overlap decomposition for the Poisson reference and emit
        /// the piece sizes.
        #[arg(long)]
        decompose: bool,
        /// Poisson truncation budget.
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Convergence table over a range of sizes for a named family template.
    Sweep {
        /// perfect-matching | two-disjoint-matchings | balanced-pm.
        #[arg(long)]
        template: String,
        /// Part count for balanced-pm.
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long)]
        n_from: u64,
        #[arg(long)]
        n_to: u64,
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
    /// Empirical joint PMF from seeded Monte Carlo draws.
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Worker chunks; each consumes its own generator stream, so results
        /// depend only on (samples, seed, workers).
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Compare against a reference ("exact" appends tv columns).
        #[arg(long)]
        against: Option<String>,
        /// Poisson truncation budget (echoed into the report).
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Exact { model, decompose, epsilon, format, out } => {
            run_exact(&ExactConfig { model, decompose, epsilon, format, out })
        }
        Command::Sweep { template, r, n_from, n_to, epsilon, format, out } => {
            let template: Template = template
                .parse()
                .map_err(|e: String| RunError::validation("UnknownTemplate", e))?;
            run_sweep(&SweepConfig { template, r, n_from, n_to, epsilon, format, out })
        }
        Command::Sample { model, samples, seed, workers, against, epsilon, format, out } => {
            if samples == 0 {
                return Err(RunError::validation(
                    "EmptySample",
                    "--samples must be at least 1".into(),
                ));
            }
            if workers == 0 {
                return Err(RunError::validation(
                    "EmptySample",
                    "--workers must be at least 1".into(),
                ));
            }
            let against_exact = match against.as_deref() {
                None => false,
                Some("exact") => true,
                Some(other) => {
                    return Err(RunError::validation(
                        "UnknownReference",
                        format!("--against {other} is not supported (expected 'exact')"),
                    ))
                }
            };
            run_sample(&SampleConfig {
                model,
                samples,
                seed,
                workers,
                against_exact,
                epsilon,
                format,
                out,
            })
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::json!({ "error": { "kind": e.kind, "message": e.message } });
            eprintln!("{record}");
            ExitCode::from(u8::try_from(e.exit_code).unwrap_or(EXIT_VALIDATION as u8))
        }
    }
}
