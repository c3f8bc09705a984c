//! IO, configuration, verification and the command-line tool built on
//! `fracperiod-core`.
//!
//! The binary is a thin wrapper around [`run`].

// guards are written `!(x > 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod io;
pub mod signal;
pub mod verify;

use std::ffi::OsString;

use clap::Parser;

use commands::{Cli, Status, UsageError};

/// Exit code for a request that could not be understood.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for a failed verification or a runtime failure.
pub const EXIT_FAILURE: i32 = 1;

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::execute(cli) {
        Ok(Status::Ok) => 0,
        Ok(Status::VerificationFailed) => EXIT_FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                EXIT_USAGE
            } else {
                EXIT_FAILURE
            }
        }
    }
}
