use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    foldlab::run(foldlab::Cli::parse())
}
