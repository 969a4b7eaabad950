//! File formats, parallel drivers and subcommands behind the `powersum` binary.

pub mod commands;
pub mod parallel;
pub mod report;
pub mod table;
