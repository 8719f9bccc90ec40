use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tapsim::cli::{cmd_report, cmd_simulate, cmd_trace, cmd_validate, OutputFormat, TapSpec};

/// Simulate and grade UI overlay attack scripts.
#[derive(Parser)]
#[command(name = "tapsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario's layout and print violations
    Validate {
        /// Scenario JSON file
        scenario: PathBuf,
    },
    /// Estimate attack success over seeded Monte Carlo trials
    Simulate {
        /// Scenario JSON file
        scenario: PathBuf,
        /// Number of trials
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output rendering
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Dispatch a single tap and print its trace line
    Trace {
        /// Scenario JSON file
        scenario: PathBuf,
        /// Tap as x,y,t (pixels, milliseconds)
        #[arg(long, value_parser = TapSpec::from_str_arg)]
        tap: TapSpec,
    },
    /// Produce a full feasibility report
    Report {
        /// Scenario JSON file
        scenario: PathBuf,
        /// Number of trials
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output rendering
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Validate { scenario } => cmd_validate(&scenario, &mut out),
        Command::Simulate {
            scenario,
            trials,
            seed,
            format,
        } => cmd_simulate(&scenario, trials, seed, format, &mut out),
        Command::Trace { scenario, tap } => cmd_trace(&scenario, tap, &mut out),
        Command::Report {
            scenario,
            trials,
            seed,
            format,
        } => cmd_report(&scenario, trials, seed, format, &mut out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
