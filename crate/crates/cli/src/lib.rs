//! Library half of the `nilborn` command-line tool: system files, report
//! rendering and the command implementations.

pub mod commands;
pub mod report;
pub mod system_file;

pub use commands::{CliError, Outcome};
pub use system_file::{SpecError, SystemSpec};
