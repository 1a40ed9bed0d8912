//! `pisubspace` command-line front end.
//!
//! Exit codes: 0 success, 1 internal or numerical failure (including failed
//! checks), 2 invalid user input.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pi(a) => commands::pi(a),
        Command::Subspace(a) => commands::subspace(a),
        Command::Summary(a) => commands::summary(a),
        Command::Check(a) => commands::check(a),
        Command::Sample(a) => commands::sample(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
