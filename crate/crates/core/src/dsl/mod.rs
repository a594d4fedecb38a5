//! Textual specification language for theories, scenarios and queries.
//!
//! One file declares one domain; queries live in separate files or on the
//! command line. `#` begins a line comment, identifiers are case-sensitive
//! and keywords are reserved.

mod lexer;
mod parser;
mod printer;

use serde::Serialize;
use std::fmt;

pub use parser::{parse_agent_sequence, parse_domain, parse_query};
pub use printer::{print_domain, print_query};

/// Source location of a token or diagnostic; 1-based line and column.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct SourceSpan {
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    pub fn new(line: u32, column: u32, length: u32) -> Self {
        SourceSpan { line, column, length: length.max(1) }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

/// A parse diagnostic; every error carries a span.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
    /// Tokens the parser would have accepted at the error position.
    pub expected: Vec<String>,
}

impl ParseDiagnostic {
    pub fn error(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseDiagnostic { severity: Severity::Error, message: message.into(), span, expected: vec![] }
    }

    pub fn expecting(message: impl Into<String>, span: SourceSpan, expected: Vec<&str>) -> Self {
        ParseDiagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
            expected: expected.into_iter().map(String::from).collect(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.span, self.severity, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" | "))?;
        }
        Ok(())
    }
}
