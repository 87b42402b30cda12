use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use imbilliard::cli::{exit_status, run, Format, RunConfig, RunOptions, Verb};

/// Inverse magnetic billiards: orbits, scans, trajectories, checks and the
/// rotation function.
#[derive(Parser)]
#[command(name = "imb", version)]
struct Args {
    /// orbit | scan | trace | check | rot
    verb: Verb,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    /// csv | svg | both
    #[arg(long)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    };
    let opts = RunOptions { out: args.out, tol: args.tol, grid: args.grid, format: args.format };
    let result = cfg.and_then(|cfg| run(args.verb, &cfg, &opts));
    match &result {
        Ok(o) => {
            for l in &o.lines {
                println!("{l}");
            }
            for f in &o.files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => eprintln!("error[{}]: {e}", e.tag()),
    }
    ExitCode::from(exit_status(&result) as u8)
}
