mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Trace(a) => commands::run_trace(a),
        Command::Charge(a) => commands::run_charge(a),
        Command::Sweep(a) => commands::run_sweep(a),
        Command::Regimes(a) => commands::run_regimes(a),
        Command::OracleCheck(a) => commands::run_oracle_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
