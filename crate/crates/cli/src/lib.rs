//! Instance parsing, command dispatch and report formatting for the `scpkit` binary.

pub mod commands;
pub mod instance;
pub mod report;

pub use commands::{run, run_bytes, COMMANDS};
pub use instance::{parse_instance, Instance, InstanceError, Payload};
pub use report::{format_report, parse_report, Format, Report};
