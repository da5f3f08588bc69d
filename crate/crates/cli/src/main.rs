// SPDX-License-Identifier: Apache-2.0

mod args;
mod commands;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command};
use commands::UsageError;

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Table(a) => {
            commands::check_finite(a.r, "r")?;
            emit(&commands::cmd_table(&a)?, a.out.output.as_deref())?;
        }
        Command::Sweep(a) => emit(&commands::cmd_sweep(&a)?, a.output.as_deref())?,
        Command::Spectrum(a) => {
            commands::check_finite(a.r, "r")?;
            emit(&commands::cmd_spectrum(&a)?, a.out.output.as_deref())?;
        }
        Command::Verify(a) => {
            let report = commands::verify_report(&a)?;
            emit(&commands::render_verify(&report)?, a.output.as_deref())?;
            if !report.all_pass() {
                eprint!("{}", commands::failure_listing(&report));
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
