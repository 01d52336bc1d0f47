//! `zeta-deltas`: distributions of differences of Riemann zeta zeros.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid zero table.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use zeta_deltas::ZeroError;

use commands::Outcome;
use config::Cli;

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;

/// Errors that mean the zero table itself is bad.
fn is_invalid_input(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        matches!(
            e.downcast_ref::<ZeroError>(),
            Some(
                ZeroError::Parse { .. }
                    | ZeroError::Overflow { .. }
                    | ZeroError::Order { .. }
                    | ZeroError::Empty
                    | ZeroError::Span { .. }
            )
        )
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.opts.workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    match pool.install(|| commands::run(cli.command, &cli.opts)) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Invalid) => ExitCode::from(EXIT_INVALID),
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_invalid_input(&e) {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}
