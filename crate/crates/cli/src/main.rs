use std::process::ExitCode;

use clap::Parser;
use stieltjes_cli::args::Cli;

fn main() -> ExitCode {
    stieltjes_cli::run(Cli::parse())
}
