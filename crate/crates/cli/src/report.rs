use std::fmt;

use obkit_core::Error;

/// Ordered `KEY: value` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn line(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn lines(&self) -> &[(String, String)] {
        &self.lines
    }

    /// The value of the first line with `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// Scenario or argument failed to parse or validate.
    Invalid = 2,
    /// A precondition of the requested computation does not hold.
    Rejected = 3,
    /// An internal identity failed.
    Internal = 4,
    /// Unknown command or malformed command line.
    Usage = 64,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }

    pub fn rejected(message: impl Into<String>) -> Self {
        Failure::new(Status::Rejected, message)
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Failure::new(Status::Invalid, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::Invalid(_) | Error::Context(_) | Error::Dimension { .. } => Status::Invalid,
            Error::Rejected(_) | Error::Unsupported(_) => Status::Rejected,
            Error::Internal(_) => Status::Internal,
        };
        Failure::new(status, e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
