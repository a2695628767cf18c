//! Library behind the `shiftlab` command-line tool.

pub mod commands;
pub mod descriptors;
pub mod error;
pub mod fixtures;
pub mod report;
pub mod threshold;

use std::time::Instant;

use clap::Parser;

pub use commands::{Cli, Command};
pub use error::{CliError, CliResult};
pub use report::Report;

/// Environment variable capping the denominator size (in bits) of emitted rationals.
pub const MAX_DENOM_BITS_VAR: &str = "SHIFTLAB_MAX_DENOM_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Rendered output and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn error(message: String) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: message,
            code: 1,
        }
    }
}

/// Parses `args` (including the program name), runs the command and renders
/// the report. Exit codes: 0 success, 2 a property verdict failed, 1 error.
pub fn run<I, T>(args: I, max_denom_bits: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        stdout: text,
                        stderr: String::new(),
                        code: 0,
                    }
                }
                _ => Outcome::error(text),
            };
        }
    };
    let cap = match max_denom_bits.map(str::parse::<u64>) {
        None => None,
        Some(Ok(bits)) => Some(bits),
        Some(Err(_)) => {
            return Outcome::error(format!(
                "error: {MAX_DENOM_BITS_VAR} must be a nonnegative integer\n"
            ))
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    match execute(&cli, cap, format) {
        Ok((stdout, holds)) => Outcome {
            stdout,
            stderr: String::new(),
            code: if holds == Some(false) { 2 } else { 0 },
        },
        Err(e) => Outcome::error(format!("error: {e}\n")),
    }
}

fn execute(cli: &Cli, cap: Option<u64>, format: Format) -> CliResult<(String, Option<bool>)> {
    let start = Instant::now();
    let mut report = cli.command.run()?;
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(cap) = cap {
        report.check_denominators(cap)?;
    }
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
        Format::Text => report.to_text(),
    };
    Ok((text, report.holds))
}
