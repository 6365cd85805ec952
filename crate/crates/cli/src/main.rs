//! `poaforge`: validate and classify piecewise instances, run the reduction
//! pipeline, sweep and optimize the worst-case family, simulate finite
//! instances, and reproduce the tight first-price-auction bound end to end.

mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

/// CLI-level failure with the process exit code it maps to.
pub(crate) struct CliError {
    pub message: String,
    pub code: u8,
}

impl CliError {
    pub fn new(message: impl Into<String>, code: u8) -> Self {
        Self { message: message.into(), code }
    }
}

impl From<poaforge_core::Error> for CliError {
    fn from(err: poaforge_core::Error) -> Self {
        CliError { message: err.to_string(), code: err.exit_code() as u8 }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::new(format!("io error: {err}"), 1)
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
