mod args;
mod report;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use kpartite_core::Error;

use crate::args::Cli;

/// Errors caused by the arguments rather than by the numerics.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidLocalDimension(_)
            | Error::InvalidT(_)
            | Error::KappaOutOfRange { .. }
            | Error::InvalidSParameter(_)
            | Error::KOutOfRange { .. }
            | Error::ProbabilityOutOfRange(_)
            | Error::NotNormalized { .. }
            | Error::InvalidStateSpec(_)
            | Error::NotAPower { .. }
            | Error::DimensionTooLarge { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidTolerance(_)
            | Error::UnknownTable(_)
            | Error::Json(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run::execute(&cli.command) {
        Ok(r) => r,
        Err(e) if is_usage_error(&e) => Cli::command().error(ErrorKind::ValueValidation, e).exit(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let body = report.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(1);
    }
    match report.failure {
        Some(reason) => {
            eprintln!("error: {reason}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
