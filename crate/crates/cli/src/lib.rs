//! Front end for the `stieltjes` binary.
//!
//! Exit codes: 0 success, 2 bad input or guard violation, 3 numerical
//! failure, 4 verification mismatch, 1 I/O.

pub mod args;
pub mod commands;
pub mod golden;
pub mod report;

use std::path::Path;
use std::process::ExitCode;

use stieltjes::{Error, Method};
use thiserror::Error;

use crate::args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("verification failed: {summary}")]
    VerifyFailed { summary: String, output: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(_) => 3,
            CliError::VerifyFailed { .. } => 4,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

/// Runs one subcommand and returns its output text.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Compute(a) => commands::compute(a, a.method.into()),
        Command::Asymptotic(a) => commands::compute(a, Method::Asymptotic),
        Command::Profile(a) => commands::profile_cmd(a),
        Command::Convergence(a) => commands::convergence_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
    }
}

fn out_path(cli: &Cli) -> Option<&Path> {
    match &cli.command {
        Command::Compute(a) | Command::Asymptotic(a) | Command::Profile(a) => a.out.as_deref(),
        Command::Convergence(a) => a.common.out.as_deref(),
        Command::Verify(a) => a.out.as_deref(),
    }
}

fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}

/// Runs the command, writes its output and maps failures to exit codes.
pub fn run(cli: Cli) -> ExitCode {
    let path = out_path(&cli);
    let result = execute(&cli).and_then(|text| emit(path, &text).map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let CliError::VerifyFailed { output, .. } = &e {
                let _ = emit(path, output);
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
