//! A restricted JSON reader for scenario files: objects, arrays, strings and
//! integers only. Every value keeps its source position, and strings keep a
//! per-character position map so errors inside embedded expressions can be
//! reported where they occur in the file.

use std::fmt;

use num_bigint::BigInt;

use crate::diag::{Code, Diagnostic};

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Str {
    pub text: String,
    /// Source position of each character of `text`, plus one for the
    /// closing quote.
    pub positions: Vec<Pos>,
}

impl Str {
    /// Position of the 1-based character column `col` inside the string.
    pub fn pos_of(&self, col: usize) -> Pos {
        let i = col.saturating_sub(1).min(self.positions.len() - 1);
        self.positions[i]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Object(Vec<(Key, Value)>),
    Array(Vec<Value>),
    Str(Str),
    Int(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Key {
    pub name: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Value {
    pub kind: Kind,
    pub pos: Pos,
}

impl Value {
    pub fn describe(&self) -> &'static str {
        match self.kind {
            Kind::Object(_) => "an object",
            Kind::Array(_) => "an array",
            Kind::Str(_) => "a string",
            Kind::Int(_) => "an integer",
        }
    }

    pub fn as_object(&self) -> Option<&[(Key, Value)]> {
        match &self.kind {
            Kind::Object(fields) => Some(fields),
            _ => None,
        }
    }

    pub fn as_array(&self) -> Option<&[Value]> {
        match &self.kind {
            Kind::Array(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&Str> {
        match &self.kind {
            Kind::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match &self.kind {
            Kind::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.as_object()?.iter().find(|(k, _)| k.name == key).map(|(_, v)| v)
    }
}

struct Reader {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

type Parsed<T> = Result<T, Diagnostic>;

impl Reader {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Parsed<T> {
        Err(Diagnostic::new(self.pos(), Code::Syntax, msg))
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r')) {
            self.bump();
        }
    }

    fn expect(&mut self, c: char) -> Parsed<()> {
        self.skip_ws();
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            Some(found) => self.fail(format!("expected '{c}', found '{found}'")),
            None => self.fail(format!("expected '{c}', found end of input")),
        }
    }

    fn value(&mut self) -> Parsed<Value> {
        self.skip_ws();
        let pos = self.pos();
        let kind = match self.peek() {
            Some('{') => self.object()?,
            Some('[') => self.array()?,
            Some('"') => Kind::Str(self.string()?),
            Some(c) if c == '-' || c.is_ascii_digit() => Kind::Int(self.integer()?),
            Some(c) if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric()) {
                    word.push(c);
                    self.bump();
                }
                return Err(Diagnostic::new(
                    pos,
                    Code::Syntax,
                    format!("'{word}' is not allowed; scenario files use only objects, arrays, strings and integers"),
                ));
            }
            Some(c) => return self.fail(format!("unexpected character '{c}'")),
            None => return self.fail("unexpected end of input"),
        };
        Ok(Value { kind, pos })
    }

    fn object(&mut self) -> Parsed<Kind> {
        self.expect('{')?;
        let mut fields: Vec<(Key, Value)> = Vec::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            self.bump();
            return Ok(Kind::Object(fields));
        }
        loop {
            self.skip_ws();
            let pos = self.pos();
            if self.peek() != Some('"') {
                return self.fail("expected a quoted key");
            }
            let name = self.string()?.text;
            if fields.iter().any(|(k, _)| k.name == name) {
                return Err(Diagnostic::new(
                    pos,
                    Code::Duplicate,
                    format!("duplicate key \"{name}\""),
                ));
            }
            self.expect(':')?;
            let v = self.value()?;
            fields.push((Key { name, pos }, v));
            self.skip_ws();
            let at = self.pos();
            match self.bump() {
                Some(',') => continue,
                Some('}') => return Ok(Kind::Object(fields)),
                _ => {
                    return Err(Diagnostic::new(
                        at,
                        Code::Syntax,
                        "expected ',' or '}' after object member",
                    ))
                }
            }
        }
    }

    fn array(&mut self) -> Parsed<Kind> {
        self.expect('[')?;
        let mut items = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(Kind::Array(items));
        }
        loop {
            items.push(self.value()?);
            self.skip_ws();
            let at = self.pos();
            match self.bump() {
                Some(',') => continue,
                Some(']') => return Ok(Kind::Array(items)),
                _ => {
                    return Err(Diagnostic::new(
                        at,
                        Code::Syntax,
                        "expected ',' or ']' after array item",
                    ))
                }
            }
        }
    }

    fn string(&mut self) -> Parsed<Str> {
        self.expect('"')?;
        let mut text = String::new();
        let mut positions = Vec::new();
        loop {
            let pos = self.pos();
            match self.bump() {
                None | Some('\n') => {
                    return Err(Diagnostic::new(pos, Code::Syntax, "unterminated string"));
                }
                Some('"') => {
                    positions.push(pos);
                    return Ok(Str { text, positions });
                }
                Some('\\') => {
                    let c = match self.bump() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('/') => '/',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('u') => self.unicode_escape(pos)?,
                        _ => return Err(Diagnostic::new(pos, Code::Syntax, "unknown escape sequence")),
                    };
                    text.push(c);
                    positions.push(pos);
                }
                Some(c) => {
                    text.push(c);
                    positions.push(pos);
                }
            }
        }
    }

    fn unicode_escape(&mut self, pos: Pos) -> Parsed<char> {
        let mut code = 0u32;
        for _ in 0..4 {
            let digit = self.bump().and_then(|c| c.to_digit(16));
            match digit {
                Some(d) => code = code * 16 + d,
                None => return Err(Diagnostic::new(pos, Code::Syntax, "malformed \\u escape")),
            }
        }
        char::from_u32(code).ok_or_else(|| Diagnostic::new(pos, Code::Syntax, "\\u escape is not a character"))
    }

    fn integer(&mut self) -> Parsed<BigInt> {
        let pos = self.pos();
        let mut digits = String::new();
        if self.peek() == Some('-') {
            digits.push('-');
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        if matches!(self.peek(), Some('.' | 'e' | 'E')) {
            return Err(Diagnostic::new(pos, Code::Syntax, "only integers are allowed"));
        }
        let body = digits.trim_start_matches('-');
        if body.is_empty() {
            return Err(Diagnostic::new(pos, Code::Syntax, "expected digits"));
        }
        if body.len() > 1 && body.starts_with('0') {
            return Err(Diagnostic::new(pos, Code::Syntax, "leading zeros are not allowed"));
        }
        Ok(digits.parse().expect("validated digits"))
    }
}

/// Parses a whole document.
pub fn parse(src: &str) -> Result<Value, Diagnostic> {
    let mut r = Reader {
        chars: src.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
    };
    let v = r.value()?;
    r.skip_ws();
    if r.peek().is_some() {
        return r.fail("trailing content after the top-level value");
    }
    Ok(v)
}
