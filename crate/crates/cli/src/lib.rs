//! Subcommand implementations for the `redord` binary.

pub mod commands;
pub mod config;

pub use commands::{cmd_selftest, run, Command, ExitStatus, Options};
