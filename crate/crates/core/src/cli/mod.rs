//! Command-line front end. Every subcommand writes its data to files and a
//! `manifest.json` echoing the resolved configuration; skipped and flagged
//! items are logged to stderr as one JSON object per line.

mod args;
mod commands;
mod io;
mod log;

use std::ffi::OsString;
use std::panic::{catch_unwind, AssertUnwindSafe};

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 on success, 1 on bad input or usage, 2 on internal
/// errors and panics.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
        }
    };
    log::set_quiet(cli.quiet);
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            log::error(
                cli.command.name(),
                &format!("cannot start worker pool: {e}"),
                "internal",
            );
            return EXIT_INTERNAL;
        }
    };
    let name = cli.command.name();
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        pool.install(|| commands::dispatch(&cli))
    }));
    match outcome {
        Ok(Ok(())) => EXIT_OK,
        Ok(Err(e)) => {
            let input = e.is_input_error();
            log::error(
                name,
                &e.to_string(),
                if input { "input" } else { "internal" },
            );
            if input {
                EXIT_INPUT
            } else {
                EXIT_INTERNAL
            }
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            log::error(name, &Error::Contract(msg).to_string(), "internal");
            EXIT_INTERNAL
        }
    }
}
