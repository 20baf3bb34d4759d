use std::process::ExitCode;

use clap::Parser;
use photon_npt::error::EXIT_CHAIN_VIOLATION;
use photon_npt::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) if outcome.consistent => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("error: a report failed its theorem-consistency check");
            ExitCode::from(EXIT_CHAIN_VIOLATION)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
