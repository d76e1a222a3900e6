//! Text syntax: `.garch` architectures, `.gpat` patterns, `.gplat` platform
//! profiles and the one-action-per-line refinement trace format.
//!
//! The normative grammar is `docs/grammar.md` in the repository.

pub mod ast;
mod actions;
mod lexer;
mod parser;
mod pattern;
mod printer;
mod profile;
mod translate;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use actions::{format_action, parse_action};
pub use ast::DslModel;
pub use parser::parse_architecture;
pub use pattern::parse_pattern;
pub use printer::{format_behavior, format_formula, format_proc, pretty_print};
pub use profile::parse_profile;
pub use translate::translate_to_core;

/// Position of a token: 1-based line and column (in characters), length in
/// bytes, and byte offset into the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
    pub offset: usize,
}

impl SourceSpan {
    pub(crate) fn clamped(mut self, input_len: usize) -> Self {
        self.offset = self.offset.min(input_len);
        self.length = self.length.min(input_len - self.offset);
        self
    }

    pub(crate) fn to(self, end: SourceSpan) -> SourceSpan {
        SourceSpan { length: (end.offset + end.length).saturating_sub(self.offset), ..self }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    /// No declaration at all: only whitespace and comments.
    EmptyInput,
    /// Text that does not form a token.
    InvalidToken,
    UnexpectedToken,
    UnknownPatternKind,
    /// Syntactically fine, but violates a pattern invariant.
    InvalidPattern,
    /// Syntactically fine, but violates a profile invariant.
    InvalidProfile,
}

impl ParseErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ParseErrorKind::EmptyInput => "EMPTY_INPUT",
            ParseErrorKind::InvalidToken => "INVALID_TOKEN",
            ParseErrorKind::UnexpectedToken => "UNEXPECTED_TOKEN",
            ParseErrorKind::UnknownPatternKind => "UNKNOWN_PATTERN_KIND",
            ParseErrorKind::InvalidPattern => "INVALID_PATTERN",
            ParseErrorKind::InvalidProfile => "INVALID_PROFILE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Points at the first offending token.
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, span: SourceSpan, expected: &[&str], found: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            expected: expected.iter().map(|s| String::from(*s)).collect(),
            found: found.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}] ", self.span, self.kind.code())?;
        match self.kind {
            ParseErrorKind::EmptyInput => f.write_str("no declaration found"),
            ParseErrorKind::UnknownPatternKind => write!(f, "unknown pattern kind `{}`", self.found),
            ParseErrorKind::InvalidPattern | ParseErrorKind::InvalidProfile => f.write_str(&self.found),
            _ => {
                f.write_str("expected ")?;
                for (i, e) in self.expected.iter().enumerate() {
                    if i > 0 {
                        f.write_str(if i + 1 == self.expected.len() { " or " } else { ", " })?;
                    }
                    f.write_str(e)?;
                }
                write!(f, ", found {}", self.found)
            }
        }
    }
}

impl core::error::Error for ParseError {}
