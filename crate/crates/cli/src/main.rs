//! `sgwigner` command-line front end.
//!
//! Exit status: 0 on success, 1 for invalid arguments or inputs, 2 when a
//! computation fails (the library error name is printed).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Failure classes mapped onto the exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(sgwigner::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
        }
    }
}

/// Errors while reading inputs are usage errors; later ones are numeric.
pub fn usage(e: sgwigner::Error) -> Failure {
    Failure::Usage(e.to_string())
}

impl From<sgwigner::Error> for Failure {
    fn from(e: sgwigner::Error) -> Self {
        Failure::Numeric(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Numeric(e) => eprintln!("error [{}]: {e}", e.name()),
            }
            ExitCode::from(f.code())
        }
    }
}
