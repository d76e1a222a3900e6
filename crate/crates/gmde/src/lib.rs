//! Command-line front end for gmde: reads `.garch`, `.gpat` and `.gplat`
//! files, runs the core operations and writes stages, traces, deployment
//! descriptors and graphs.

pub mod cli;
pub mod commands;
pub mod dot;
pub mod json;

pub use cli::run;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 1;
    pub const PROPERTY: i32 = 2;
    pub const STATE_CAP: i32 = 3;
    pub const PATTERN: i32 = 4;
    pub const ACTION: i32 = 5;
    pub const PLATFORM: i32 = 6;
    pub const WRITE: i32 = 7;
    pub const USAGE: i32 = 64;
}

/// A command that could not finish; `message` goes to stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}
