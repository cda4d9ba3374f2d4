//! Command-line front end for the `hermblock` library.
//!
//! Exit codes: 0 pass, 1 inequality violated, 2 invalid input, 3 resource
//! cap, 4 hypothesis violated without `--force`.

mod args;
mod decompose;
mod files;
mod generate;
mod report;
mod search;
mod verify;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;

pub use args::{Cli, Command};
pub use files::{read_block_matrix, BlockFile, MatrixFile};
pub use report::RunReport;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_HYPOTHESIS: u8 = 4;

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<hermblock::Error> for Failure {
    fn from(e: hermblock::Error) -> Self {
        use hermblock::Error as E;
        let code = match &e {
            E::ResourceCap(_) => EXIT_RESOURCE,
            E::HypothesisViolated(_) => EXIT_HYPOTHESIS,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::invalid(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::invalid(format!("malformed JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Parses arguments, runs the command and returns the exit code.
pub fn run_from_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run(&cli, echo) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn run(cli: &Cli, echo: Vec<String>) -> CliResult<u8> {
    let start = Instant::now();
    let tol = cli.global.tol.unwrap_or(hermblock::tol::TOL_CERT);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::invalid(format!("--tol must be finite and ≥ 0, got {tol}")));
    }
    let mut report = RunReport::new(echo, tol);
    let code = match &cli.command {
        Command::Decompose(a) => decompose::run(a, &mut report)?,
        Command::Verify(a) => verify::run(a, tol, &mut report)?,
        Command::Generate(a) => generate::run(a, &mut report)?,
        Command::Search(a) => search::run(a, &mut report)?,
    };
    if !cli.global.no_timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    report.exit_code = code;
    report.emit(&cli.global)?;
    Ok(code)
}
