//! `gsb`: verification suites, diagnostic reports and numerical inversion.

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod inputs;
mod invert;
mod output;
mod reports;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CommonArgs, ConfigError, RunConfig};
use output::{write_tables, Table};
use reports::ReportKind;
use suites::Suite;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "gsb", version, about = "Segal-Bargmann transform checks for tori and SU(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite; exits 1 when any case fails
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit a diagnostic table
    Report {
        #[arg(value_enum)]
        kind: ReportKind,
        /// Coefficient file for `smoothness` (default: f = 1)
        #[arg(long)]
        coefs: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reconstruct f at given points from its transform
    Invert {
        /// Coefficient file of f
        #[arg(long)]
        coefs: PathBuf,
        /// JSON list of points of K
        #[arg(long)]
        points: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("gsb: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn init_threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var("GSB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| ConfigError(format!("GSB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError(e.to_string()))
}

fn emit(cfg: &RunConfig, tables: &[Table]) -> Result<(), ExitCode> {
    match write_tables(&cfg.out, tables, cfg.format) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            Ok(())
        }
        Err(e) => Err(usage(format!("cannot write reports to {}: {e}", cfg.out.display()))),
    }
}

fn run(cli: Cli) -> ExitCode {
    if let Err(e) = init_threads() {
        return usage(e);
    }
    match cli.command {
        Command::Verify { suite, common } => {
            let cfg = match RunConfig::resolve(&common) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let tables = match suites::run(suite, &cfg) {
                Ok(t) => t,
                Err(e) => return usage(e.0),
            };
            if let Err(code) = emit(&cfg, &tables) {
                return code;
            }
            if suites::all_pass(&tables) {
                ExitCode::SUCCESS
            } else {
                eprintln!("gsb: {suite} has failing cases");
                ExitCode::from(EXIT_FAIL)
            }
        }
        Command::Report { kind, coefs, common } => {
            let mut cfg = match RunConfig::resolve(&common) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let f = match coefs.as_deref().map(inputs::load_coefs).transpose() {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            if let Some(f) = &f {
                cfg.group = f.spec();
            }
            match reports::run(kind, &cfg, f.as_ref()) {
                Ok(tables) => match emit(&cfg, &tables) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(code) => code,
                },
                Err(gsb_core::GsbError::InvalidArgument(m)) => usage(m),
                Err(e) => {
                    eprintln!("gsb: {e}");
                    ExitCode::from(EXIT_FAIL)
                }
            }
        }
        Command::Invert { coefs, points, common } => {
            let mut cfg = match RunConfig::resolve(&common) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let f = match inputs::load_coefs(&coefs) {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            cfg.group = f.spec();
            let xs = match inputs::load_points(&points, f.spec()) {
                Ok(x) => x,
                Err(e) => return usage(e),
            };
            match invert::run(&cfg, &f, &xs) {
                Ok((tables, ok)) => {
                    if let Err(code) = emit(&cfg, &tables) {
                        return code;
                    }
                    if ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(EXIT_FAIL)
                    }
                }
                Err(e) => {
                    eprintln!("gsb: {e}");
                    ExitCode::from(EXIT_FAIL)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
