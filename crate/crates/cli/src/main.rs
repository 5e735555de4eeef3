use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use brauer_cli::{parse_job, render::render_text, run_job, OutputMode};
use clap::Parser;

/// Compute residues, exponents, indices and quadratic-form invariants of
/// Brauer classes described by a job file (or standard input).
#[derive(Parser, Debug)]
#[command(name = "brauer", version)]
struct Args {
    /// Read the job from this file instead of standard input.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Emit a single JSON object instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for scans and random searches (overrides the job).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of samples for scans (overrides the job).
    #[arg(long)]
    samples: Option<usize>,
    /// Candidate budget for searches (overrides the job).
    #[arg(long)]
    budget: Option<usize>,
    /// Worker threads for scans (overrides the job; default 1).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s).map_err(|e| format!("stdin: {e}"))
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let mut job = match parse_job(&text) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let o = &mut job.options;
    o.seed = args.seed.or(o.seed);
    o.samples = args.samples.or(o.samples);
    o.budget = args.budget.or(o.budget);
    o.workers = args.workers.or(o.workers);
    if args.json {
        job.output = OutputMode::Json;
    }
    match run_job(&job) {
        Ok(report) => {
            match job.output {
                OutputMode::Json => println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable")),
                OutputMode::Text => print!("{}", render_text(&report)),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
