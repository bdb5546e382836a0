mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use qtemp_core::{ErrorClass, SpectrumError, SpinError, ThermometerError};
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(_) | Failure::Io(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<qtemp_core::Error> for Failure {
    fn from(e: qtemp_core::Error) -> Self {
        match e.class() {
            ErrorClass::Domain => Failure::Domain(e.to_string()),
            ErrorClass::Numerical => Failure::Numerical(e.to_string()),
        }
    }
}

macro_rules! via_core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                qtemp_core::Error::from(e).into()
            }
        }
    )*};
}

via_core_error!(SpectrumError, SpinError, ThermometerError);

fn run(cli: &Cli) -> Result<(), Failure> {
    let doc = match &cli.command {
        Command::Epr(a) => commands::epr(a)?,
        Command::Shifts(a) => commands::shifts(a)?,
        Command::Calibrate(a) => commands::calibrate(a)?,
        Command::Eigensystem(a) => commands::eigensystem(a)?,
        Command::Fig2(a) => commands::fig2(a)?,
        Command::Sample(a) => commands::sample(a)?,
        Command::AppendixCheck(a) => commands::appendix_check(a)?,
    };
    let bytes = output::render(&doc, cli)?;
    output::emit(&bytes, cli.output.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
