//! Command-line front end: input formats, reports and command dispatch.

pub mod commands;
pub mod input;
pub mod report;
