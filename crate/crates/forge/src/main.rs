use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use holonomy_core::matrix::DEFAULT_TOL;
use holonomy_forge::{run_file, Format, OutputOverrides, RunOptions};

#[derive(Parser)]
#[command(name = "holonomy-forge", version, about = "Orange-slice geometric phase experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its report.
    Run {
        config: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Worker threads for sweeps.
        #[arg(long)]
        jobs: Option<usize>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance of the unitarity and hermiticity checks.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tolerance: f64,
        /// Add wall-clock timing to the report.
        #[arg(long)]
        timing: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Command::Run {
        config,
        output,
        format,
        jobs,
        seed,
        tolerance,
        timing,
    } = cli.command;
    let overrides = OutputOverrides { path: output, format };
    let opts = RunOptions {
        seed,
        jobs,
        tolerance,
        timing,
    };
    match run_file(&config, &overrides, &opts) {
        Ok((text, None)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok((_, Some(_))) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code as u8)
        }
    }
}
