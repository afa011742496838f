//! `barter`: run the alluring-accepting-confirming protocol on scenario
//! files, compare against the exhaustive oracle, sweep parameters and draw
//! the geometry.
//!
//! Exit codes: 0 success, 1 invalid input, 2 guard violation.

mod commands;
mod export;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "barter", version, about = "Bilateral barter matching simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the engine on a scenario and print a summary table.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Write the result here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the engine and compare it with the exhaustive optimum.
    Oracle {
        scenario: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value = "utilitarian")]
        objective: barter_core::oracle::Objective,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun the engine over a grid of one parameter and write a CSV table.
    Sweep {
        scenario: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        param: barter_core::io::SweepParameter,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw demand circles and offer dots as SVG.
    Render {
        scenario: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Run the engine first and draw the matches.
        #[arg(long, conflicts_with = "result")]
        run: bool,
        /// Draw the matches from a saved result document.
        #[arg(long)]
        result: Option<PathBuf>,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in scenario as a scenario file.
    ExportScenario(export::ExportArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct EngineArgs {
    /// Overrides the seed in the scenario file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_rounds: Option<u32>,
    /// Allure at most k candidates per round (implies greedy).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum StrategyArg {
    Greedy,
    Random,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
