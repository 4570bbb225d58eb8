//! Command-line front end for `banddepth`: curve CSV input, depth tables,
//! screening, and the seeded simulation reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use std::ffi::OsString;
use std::path::Path;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io::emit;

#[derive(Debug, Parser)]
#[command(name = "banddepth", version, about = "Band depths for functional data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Depth and rank of every curve: id,depth,rank
    Depth(RunConfig),
    /// Flag the least deep curves and write the trimmed mean
    Screen(RunConfig),
    /// Write only the depth-trimmed mean
    TrimmedMean(RunConfig),
    /// Replicated comparison of trimmed means under contamination
    Simulate(RunConfig),
    /// Agreement between full-sample and resampled depth ranks
    ResampleCheck(RunConfig),
    /// Draw one contaminated sample with its labels
    Generate(RunConfig),
}

impl Command {
    fn config(&self) -> &RunConfig {
        match self {
            Command::Depth(c)
            | Command::Screen(c)
            | Command::TrimmedMean(c)
            | Command::Simulate(c)
            | Command::ResampleCheck(c)
            | Command::Generate(c) => c,
        }
    }
}

fn write_into(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    emit(Some(&dir.join(name)), contents)
}

fn execute(command: &Command, cfg: &RunConfig) -> Result<()> {
    let out = cfg.output.as_deref();
    match command {
        Command::Depth(_) => emit(out, &commands::cmd_depth(cfg)?),
        Command::Screen(_) => {
            let s = commands::cmd_screen(cfg)?;
            if let Some(p) = cfg.mean_output.as_deref() {
                emit(Some(p), &s.mean)?;
            }
            emit(out, &s.flagged)
        }
        Command::TrimmedMean(_) => emit(out, &commands::cmd_screen(cfg)?.mean),
        Command::Simulate(_) => {
            let files = commands::cmd_simulate(cfg)?;
            if let Some(dir) = cfg.out_dir.as_deref() {
                write_into(dir, "table.csv", &files.table_csv)?;
                write_into(dir, "table.txt", &files.table_txt)?;
                write_into(dir, "ei.csv", &files.ei_csv)?;
            }
            emit(out, &files.table_txt)
        }
        Command::ResampleCheck(_) => {
            let files = commands::cmd_resample_check(cfg)?;
            if let Some(dir) = cfg.out_dir.as_deref() {
                write_into(dir, "ranks.csv", &files.ranks_csv)?;
                write_into(dir, "correlations.csv", &files.correlations_csv)?;
                return Ok(());
            }
            emit(out, &files.ranks_csv)
        }
        Command::Generate(_) => {
            let g = commands::cmd_generate(cfg)?;
            if let Some(p) = cfg.labels.as_deref() {
                emit(Some(p), &g.labels)?;
            }
            emit(out, &g.curves)
        }
    }
}

/// Resolves the configuration and runs the command on a pool of the
/// requested size.
pub fn run(command: &Command) -> Result<()> {
    let cfg = command.config().clone().resolve()?;
    match cfg.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?
            .install(|| execute(command, &cfg)),
        None => execute(command, &cfg),
    }
}

/// Parses arguments, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
