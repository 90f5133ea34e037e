//! `cbundle`: batch front end for metric graph bundle experiments.
//!
//! Reports go to standard output, or to `report.json` inside `--out`
//! together with any files the command produces. Progress goes to standard
//! error. Exit status is 0 when every asserted invariant held, 1 when one
//! failed, and 2 on bad input.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use config::{AnalysisParams, Command, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "cbundle", version, about = "Metric graph bundles on finite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every sampled step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory for the report and produced files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Analysis parameters (JSON, or TOML by extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    let params = match &cli.config {
        Some(path) => AnalysisParams::load(path)?,
        None => AnalysisParams::default(),
    };
    let cfg = RunConfig {
        command: cli.command,
        params: params.with_seed(cli.seed),
        seed: cli.seed,
        threads: cli.threads,
        out: cli.out,
    };
    let outcome = commands::execute(&cfg)?;
    let bytes = outcome.report.to_bytes();
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, data) in &outcome.artifacts {
                std::fs::write(dir.join(name), data).with_context(|| format!("writing {name}"))?;
            }
            std::fs::write(dir.join("report.json"), &bytes).context("writing report.json")?;
            log::info!("wrote {}", dir.display());
        }
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(outcome.report.held())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            log::error!("some invariants failed; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
