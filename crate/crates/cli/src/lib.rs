//! Plumbing behind the `triscore` binary: score-file parsing, report and CSV
//! rendering, and the subcommand implementations. Every command renders to a
//! `String` so it can be tested without spawning a process.

pub mod commands;
pub mod error;
pub mod report;
pub mod scorefile;

pub use error::{CliError, ExitCode};
