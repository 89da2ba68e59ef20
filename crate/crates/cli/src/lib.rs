//! Command dispatch for the `greenbayes` binary.
//!
//! `run` is the whole program behind a testable seam: it parses argv, runs
//! one subcommand, writes the payload to `stdout` and diagnostics to
//! `stderr`, and returns the exit status (0 success, 1 runtime error,
//! 2 usage error). Nothing is printed through any other channel.

pub mod args;
mod commands;
mod output;
pub mod reproduce;

use args::{Cli, Command};
use clap::Parser;
use std::ffi::OsString;
use std::io::Write;

pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version output on "error"
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if is_help {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = write!(stderr, "{e}");
            return 2;
        }
    };

    let result = match &cli.command {
        Command::Interval(a) => commands::interval(a, cli.format),
        Command::Fit(a) => commands::fit(a, cli.format),
        Command::Posterior(a) => commands::posterior(a, cli.format),
        Command::Simulate(a) => commands::simulate(a, cli.format),
        Command::Score(a) => commands::score(a, cli.format),
        Command::Convert(a) => commands::convert(a, cli.format),
        Command::Reproduce => reproduce::render(cli.format),
    };

    match result {
        Ok(payload) => {
            if stdout.write_all(payload.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}
