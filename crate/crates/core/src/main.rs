use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavetrace::cli::{cmd_compare, cmd_run, exit};

/// Wave-potential ray tracing for Helmholtz-type waves.
#[derive(Parser)]
#[command(name = "wavetrace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its tables, report and manifest.
    Run {
        config: PathBuf,
        /// Output directory (defaults to the scenario's output.dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a finished run with the analytic references.
    Compare { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(exit::CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let status = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out.as_deref()),
        Command::Compare { dir } => cmd_compare(&dir),
    };
    ExitCode::from(status as u8)
}
