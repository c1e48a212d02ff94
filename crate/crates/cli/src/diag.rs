//! Positioned scenario diagnostics with stable codes.

use std::fmt;

use crate::json::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Code {
    /// Not well-formed restricted JSON.
    Syntax,
    /// Missing, unknown or wrongly typed field.
    Shape,
    /// A name that is not declared.
    Unresolved,
    /// A definition that fails its mathematical checks.
    Validation,
    /// A malformed word, ring element or generator sequence inside a string.
    Expression,
    /// A name or key declared twice.
    Duplicate,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Syntax => "E100",
            Code::Shape => "E101",
            Code::Unresolved => "E102",
            Code::Validation => "E103",
            Code::Expression => "E104",
            Code::Duplicate => "E105",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub code: Code,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            pos,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.code.as_str(), self.message)
    }
}
