//! `blowup`: profiles, large solutions, verification reports, Hardy
//! constants and parameter sweeps from one TOML config.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad
//! configuration, 3 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use blowup_core::parallel::Execution;
use clap::{Parser, Subcommand};

use commands::{Context, Failure};
use config::RunConfig;
use output::OutDir;

#[derive(Parser)]
#[command(name = "blowup", version, about = "Large solutions with a Hardy potential on radial domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.directory`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Tabulate ψ, φ and φ̃ and the profile constants.
    Profile,
    /// Solve for one large solution.
    Solve,
    /// Run the verification suite.
    Verify,
    /// Discrete Hardy constant under refinement.
    Hardy,
    /// Fitted constants over a parameter list.
    Sweep,
}

fn execution(threads: Option<usize>) -> Result<Execution, Failure> {
    match threads {
        Some(0) => Err(Failure::Config("--threads must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Config(e.to_string()))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
        None => Ok(Execution::Parallel),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("--config <path> is required".into()))?;
    let cfg = RunConfig::load(path).map_err(|e| Failure::Config(e.to_string()))?;
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.output.directory.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let ctx = Context {
        exec: execution(cli.threads)?,
        out: OutDir::create(&dir)?,
        cfg,
    };
    match cli.command {
        Command::Profile => commands::profile(&ctx),
        Command::Solve => commands::solve(&ctx),
        Command::Verify => commands::verify(&ctx),
        Command::Hardy => commands::hardy(&ctx),
        Command::Sweep => commands::sweep_cmd(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = run(&cli);
    // wall time only goes to stderr: files stay byte-identical across runs
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
