//! Text formats: schemas, facts, queries, GAV mappings and ASP programs.

mod lexer;
mod parser;

use std::fmt;
use std::path::Path;

pub use parser::{parse_asp, parse_facts, parse_mapping, parse_query, parse_schema};

use crate::program::AspProgram;

/// Input text plus a label used in diagnostics.
#[derive(Clone, Debug)]
pub struct SourceText {
    pub content: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(origin: impl Into<String>, content: impl Into<String>) -> Self {
        SourceText { content: content.into(), origin: origin.into() }
    }

    pub fn inline(content: impl Into<String>) -> Self {
        SourceText::new("<inline>", content)
    }

    pub fn from_file(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let path = path.as_ref();
        Ok(SourceText::new(path.display().to_string(), std::fs::read_to_string(path)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub origin: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(origin: &str, line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { origin: origin.to_string(), line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.origin, self.line, self.column, self.message)
    }
}

/// The program text: rules in normalized order, then the query statement.
pub fn emit_asp(program: &AspProgram) -> String {
    program.to_string()
}
