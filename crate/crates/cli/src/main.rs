#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::*;
use manifest::Outputs;

#[derive(Parser, Debug)]
#[command(name = "critkdv", version, about = "Critical lengths and trapping directions for boundary-controlled KdV")]
struct Cli {
    /// Directory for output files and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify n, or the length L, as a critical length.
    Classify(ClassifyArgs),
    /// Pairs (k, l) with k² + kl + l² = n.
    Pairs(PairsArgs),
    /// Sample an eigenmode to CSV.
    Eigenmode(EigenmodeArgs),
    /// Roots of λ³ + λ + iτ = 0.
    Roots(RootsArgs),
    /// τ-scan of ∫B with slope fit.
    Bscan(BscanArgs),
    /// Q_M for a bump control, time and frequency side.
    Qm(QmArgs),
    /// Trapping experiment from εΨ.
    Trap(TrapArgs),
    /// Projections on the unreachable subspace and the rotation law.
    Minv(MinvArgs),
    /// Pass/fail matrix over the acceptance criteria.
    Validate(ValidateArgs),
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let start = Instant::now();
    let mut out = Outputs::new(&cli.out_dir)?;
    let (name, params, result) = match &cli.command {
        Command::Classify(a) => ("classify", serde_json::to_value(a)?, classify(a, &mut out)),
        Command::Pairs(a) => ("pairs", serde_json::to_value(a)?, pairs(a, &mut out)),
        Command::Eigenmode(a) => ("eigenmode", serde_json::to_value(a)?, eigenmode(a, &mut out)),
        Command::Roots(a) => ("roots", serde_json::to_value(a)?, roots(a, &mut out)),
        Command::Bscan(a) => ("bscan", serde_json::to_value(a)?, bscan(a, &mut out)),
        Command::Qm(a) => ("qm", serde_json::to_value(a)?, qm(a, &mut out)),
        Command::Trap(a) => ("trap", serde_json::to_value(a)?, trap(a, &mut out)),
        Command::Minv(a) => ("minv", serde_json::to_value(a)?, minv(a, &mut out)),
        Command::Validate(a) => ("validate", serde_json::to_value(a)?, validate(a, cli.seed, &mut out)),
    };
    let mut params = params;
    if let Some(m) = params.as_object_mut() {
        m.insert("seed".into(), cli.seed.into());
    }
    out.finish(name, params, start.elapsed().as_secs_f64())?;
    result
}
