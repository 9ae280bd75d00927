//! Command-line front end for `sparsepath`.
//!
//! Each fitting subcommand reads CSV inputs and writes `path.csv` (one row
//! per output time), `path.json` (the resolved configuration and the entry
//! order) and, with `--plot`, `path.svg`. Exit codes: 0 success, 2 usage
//! error, 3 data error, 4 numerical failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod data;
pub mod error;
pub mod output;
pub mod plot;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, CliResult};

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("sparsepath: {e}");
            e.exit_code()
        }
    }
}
