//! File ingestion, job dispatch, and report emission for the `jsc`
//! command-line tool.

pub mod input;
pub mod job;
pub mod report;

pub use input::{parse_input, parse_input_str, ParsedInput};
pub use job::{run, Command, Format, JobSpec};
