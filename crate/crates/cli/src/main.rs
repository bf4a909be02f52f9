//! `tregress`: evaluate distributions, draw samples, and verify the
//! order-statistic regression identities from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails (or cannot be
//! completed numerically), 2 on usage or parameter errors.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli) {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail(summary)) => {
            eprintln!("verification failed: {summary}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
