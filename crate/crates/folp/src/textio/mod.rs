//! Concrete syntax: parsing and printing of rule programs and description
//! logic knowledge bases, plus DOT export of tableau states.

mod dot;
mod parse;
mod parse_dl;
mod print;

pub use dot::{depgraph_to_dot, to_dot};
pub use parse::parse_program;
pub use parse_dl::parse_dl;
pub use print::{print_program, print_rule};

use std::fmt;

use thiserror::Error;

/// Location of a token or error inside an input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl SourceSpan {
    pub fn point(line: usize, col: usize) -> Self {
        SourceSpan { line, col_start: col, col_end: col }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}", self.line, self.col_start, self.col_end)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError { span, message: message.into() }
    }
}
