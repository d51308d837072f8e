//! Harness library behind the `matbreak` binary: subcommand
//! implementations, randomized campaigns, the scaling benchmark, and the
//! built-in known-answer checks.

pub mod args;
pub mod bench;
pub mod campaign;
pub mod commands;
pub mod files;
pub mod verify;
