//! `selab`: batch runner for the scaling-entropy experiments.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 budget
//! exceeded, 3 verification-suite failure.

mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use commands::{Command, Outcome};
use config::Params;

#[derive(Parser, Debug)]
#[command(name = "selab", version, about = "Finite-scale scaling-entropy experiments")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML file with the same keys as the flags (snake_case).
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(flatten)]
    params: Params,
}

const EXIT_INVALID: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_SUITE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::SuiteFailure) => ExitCode::from(EXIT_SUITE),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e
                .downcast_ref::<scaling_entropy::Error>()
                .is_some_and(scaling_entropy::Error::is_budget);
            ExitCode::from(if budget { EXIT_BUDGET } else { EXIT_INVALID })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let file = match &cli.config {
        Some(path) => Params::load(path)?,
        None => Params::default(),
    };
    let params = file.merged(cli.params);
    params.validate()?;
    if let Some(n) = params.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    commands::run(cli.command, params)
}
