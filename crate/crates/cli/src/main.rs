use std::process::ExitCode;

mod commands;
mod config;
mod error;
mod families;
mod output;

use commands::Registry;
use config::{Parsed, RTOL_ENV};

fn main() -> ExitCode {
    let registry = Registry::builtin();
    let result =
        config::parse_args(&registry, std::env::args_os()).and_then(|parsed| match parsed {
            Parsed::Info(text) => {
                print!("{text}");
                Ok(())
            }
            Parsed::Run(config) => {
                let config = config.with_rtol_override(std::env::var(RTOL_ENV).ok())?;
                commands::run(&registry, &config)
            }
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                error::CliError::Usage(text) => eprintln!("{}", text.trim_end()),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
