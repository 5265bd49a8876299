mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;
use mldeg_core::{Error, ErrorClass};

use args::Cli;

/// How a command finished when it still produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Counts disagreed after the retry budget.
    Anomaly,
    /// Two independent computations that must agree did not.
    Internal,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Anomaly => 2,
            Status::Internal => 3,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Input => 1,
                ErrorClass::Anomaly => 2,
                ErrorClass::Internal => 3,
            },
            CliError::Usage(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(CliError::from(Error::NegativeExponent { index: 0, value: -1 }).code(), 1);
        assert_eq!(CliError::from(Error::LiftingBudgetExhausted { attempts: 8, last_seed: 1 }).code(), 2);
        assert_eq!(CliError::from(Error::Internal("engines disagree".into())).code(), 3);
        assert_eq!(CliError::Usage("bad".into()).code(), 1);
        assert_eq!(CliError::Io("gone".into()).code(), 1);
        assert_eq!((Status::Ok.code(), Status::Anomaly.code(), Status::Internal.code()), (0, 2, 3));
    }
}
