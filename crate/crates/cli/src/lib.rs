//! Command-line front end: system and resolution files in JSON, one
//! subcommand per library operation.

pub mod format;
pub mod run;
