//! `harnack`: evaluate bounds and kernels, run certification sweeps and
//! entropy traces. Exit codes: 0 pass, 1 violation, 2 usage or contract
//! error, 3 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod render;

use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(&cli.command) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("harnack: {e}");
            ExitCode::from(e.code())
        }
    }
}
