mod args;
mod commands;
mod field_spec;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const ERROR: u8 = 1;
    pub const EXHAUSTED: u8 = 2;
    pub const PROPERTY_FAILS: u8 = 3;
    pub const LIMIT: u8 = 4;
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::ERROR
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_limit() {
                exit::LIMIT
            } else {
                exit::ERROR
            })
        }
    }
}
