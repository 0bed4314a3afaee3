use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multiport_ghz::report::{
    bench_permanents, bench_to_csv, log_time_slope, probability_table, run, suppression_listing,
    table_to_csv, RunOptions, TABLE_MAX_N,
};
use multiport_ghz::verify::{Harness, Level};
use multiport_ghz::SchemeKind;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] multiport_ghz::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot serialize output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Threads(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "constraint",
            CliError::Io(_) => "io",
            CliError::Json(_) => "serialization",
            CliError::Threads(_) => "usage",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

/// Post-selected GHZ-state generation in linear-optical multiports.
#[derive(Debug, Parser)]
#[command(name = "mpghz", version)]
struct Cli {
    /// Worker threads for the parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scheme and report its post-selected state.
    Run {
        /// odd, even, 2n, single-mode or pbs.
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long)]
        n: usize,
        /// Detection mode for the single-mode scheme.
        #[arg(long, default_value_t = 1)]
        mode: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accept the odd-scheme input at n = 4.
        #[arg(long)]
        allow_special_n4: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Simulated and closed-form success probabilities for n = 1..=n_max.
    Table {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every output pattern of n photons through the n-mode DFT, with the
    /// suppression-law verdict next to the computed probability.
    Suppression {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the numerical acceptance checks.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
        /// Perturb one DFT phase by this many radians (negative control).
        #[arg(long, hide = true)]
        tamper_phase: Option<f64>,
    },
    /// Time the Ryser permanent on random matrices.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 12, 16, 20])]
        dims: Vec<usize>,
        /// Approximate time spent per dimension, in milliseconds.
        #[arg(long, default_value_t = 50)]
        budget_ms: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Threads(e.to_string()))?;
    }
    match cli.command {
        Command::Run {
            scheme,
            n,
            mode,
            format,
            out,
            allow_special_n4,
            tol,
        } => {
            let opts = RunOptions {
                kind: scheme,
                n,
                mode,
                allow_special_n4,
                tol,
            };
            let report = run(&opts)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Csv => report.to_csv(),
            };
            emit(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Table { n_max, format, out } => {
            if n_max > TABLE_MAX_N {
                return Err(multiport_ghz::Error::TooManyPhotons {
                    photons: n_max,
                    limit: TABLE_MAX_N,
                }
                .into());
            }
            let rows = probability_table(n_max)?;
            let text = match format {
                Format::Json => to_json(&rows)?,
                Format::Csv => table_to_csv(&rows),
            };
            emit(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Suppression {
            n,
            tol,
            format,
            out,
        } => {
            let report = suppression_listing(n, tol)?;
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Csv => report.to_csv(),
            };
            emit(&out, &text)?;
            eprintln!(
                "n={n}: {} patterns, {} allowed, {} violations, {} allowed but vanishing",
                report.rows.len(),
                report.allowed_count(),
                report.violations().len(),
                report.extra_zeros().len()
            );
            if report.mismatches() > 0 {
                eprintln!("certification mismatch: {} patterns", report.mismatches());
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            level,
            tamper_phase,
        } => {
            let level = match level {
                VerifyLevel::Quick => Level::Quick,
                VerifyLevel::Full => Level::Full,
            };
            let harness = match tamper_phase {
                Some(phase) => Harness::tampered(level, phase),
                None => Harness::new(level),
            };
            let mut failed = 0;
            for id in 1..=10 {
                let outcome = harness.criterion(id);
                println!("{}", outcome.line());
                failed += usize::from(!outcome.passed);
            }
            println!("{} of 10 criteria passed", 10 - failed);
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Bench {
            dims,
            budget_ms,
            out,
        } => {
            let rows = bench_permanents(&dims, budget_ms * 1_000_000)?;
            emit(&out, &bench_to_csv(&rows))?;
            if rows.len() >= 2 {
                eprintln!(
                    "log-time slope {:.4} per dimension (ln 2 = {:.4})",
                    log_time_slope(&rows),
                    std::f64::consts::LN_2
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            let obj = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{obj}");
            ExitCode::from(2)
        }
    }
}
