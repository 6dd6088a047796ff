//! Front end for the `star` binary: spec files, table files, probe suites
//! and report handling on top of `starprod-core`.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod source;
pub mod spec;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use error::{CliError, CliResult};

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let outcome = match &cli.command {
        args::Command::Eval(a) => commands::eval(a, stdout),
        args::Command::Verify(a) => commands::verify(a, stdout, stderr),
        args::Command::Report(a) => commands::report(a, stdout, stderr),
        args::Command::Gram(a) => commands::gram(a, stdout),
        args::Command::Gns(a) => commands::gns(a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "star: {e}");
            e.exit_code()
        }
    }
}
