//! Config-driven experiment runner.
//!
//! Exit codes: 0 on PASS/success, 1 on FAIL or a failed certificate,
//! 2 on configuration errors.

mod config;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::ExperimentConfig;
use tasks::{default_out_dir, run, RunOpts};

#[derive(Parser)]
#[command(name = "fracsum", about = "Arithmetic sums of fractal attractors on bit-grids")]
struct Args {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's `output`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the grid kernels (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Seed override for randomized tasks.
    #[arg(long)]
    seed: Option<u64>,
    /// Run sum-identity checks below the threshold as INFORMATIONAL.
    #[arg(long)]
    force: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match ExperimentConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let out_dir = default_out_dir(&cfg, args.out);
    let opts = RunOpts { workers: args.workers, seed: args.seed, force: args.force };
    match run(&cfg, &opts, &out_dir) {
        Ok(code) => {
            println!("report written to {}", out_dir.join("report.txt").display());
            ExitCode::from(code as u8)
        }
        Err(e) => {
            // Missing task fields are configuration errors; everything else
            // is a runtime failure.
            let msg = format!("{e:#}");
            if msg.contains("requires the") || msg.contains("below the threshold") {
                eprintln!("configuration error: {msg}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        }
    }
}
