//! Text grammars shared by the library and the scenario format.
//!
//! - group words: `1` or `ident ('^' int)? ('*' ident ('^' int)?)*`
//! - ring elements: signed sums of `int`, `word`, or `int*word`,
//!   e.g. `2*g + -1*h`, `1+s`, `1 - t^2`
//! - Wh expressions: signed sums of `coef[word]` with `coef` an integer or
//!   a tuple `(a,b,...)`, e.g. `(1,0)[s*t] + (0,2)[t]`, `-[u] - [u^-1]`, `0`
//! - generator sequences: `E(i,j,"ring") ; D(i,"±word")`, 1-based indices
//!
//! Columns in errors are 1-based.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0, base: 0 }
    }

    fn with_base(src: &'a str, base: usize) -> Self {
        Cursor { src, pos: 0, base }
    }

    fn column(&self) -> usize {
        self.base + self.src[..self.pos].chars().count() + 1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.column(), msg))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn unsigned(&mut self) -> Result<BigInt> {
        match self.digits() {
            Some(d) => Ok(d.parse().expect("ascii digits")),
            None => self.err("expected an integer"),
        }
    }

    fn signed(&mut self) -> Result<BigInt> {
        let neg = self.eat('-');
        let v = self.unsigned()?;
        Ok(if neg { -v } else { v })
    }

    fn small_signed(&mut self) -> Result<i64> {
        let col = self.column();
        let v = self.signed()?;
        i64::try_from(v).map_err(|_| Error::parse(col, "exponent out of range"))
    }

    fn index(&mut self) -> Result<usize> {
        let col = self.column();
        let v = self.unsigned()?;
        usize::try_from(v).map_err(|_| Error::parse(col, "index out of range"))
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        if end == 0 {
            return None;
        }
        self.pos += end;
        Some(&rest[..end])
    }

    /// `'1'` not followed by another digit.
    fn eat_identity(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with('1') && !rest[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

fn word_factor(cur: &mut Cursor<'_>, group: &GroupSpec) -> Result<GroupElement> {
    if cur.eat_identity() {
        return Ok(GroupElement::identity());
    }
    let col = cur.column();
    let Some(name) = cur.ident() else {
        return cur.err("expected a generator name or 1");
    };
    let (f, g) = group
        .lookup(name)
        .ok_or_else(|| Error::parse(col, format!("unknown generator '{name}'")))?;
    let exp = if cur.eat('^') { cur.small_signed()? } else { 1 };
    Ok(group.gen_power(f, g, exp))
}

fn word(cur: &mut Cursor<'_>, group: &GroupSpec) -> Result<GroupElement> {
    let mut acc = word_factor(cur, group)?;
    while cur.eat('*') {
        let next = word_factor(cur, group)?;
        acc = group.mul(&acc, &next);
    }
    Ok(acc)
}

pub fn parse_group_element(group: &GroupSpec, text: &str) -> Result<GroupElement> {
    let mut cur = Cursor::new(text);
    let g = word(&mut cur, group)?;
    cur.finish()?;
    Ok(g)
}

fn ring_term(cur: &mut Cursor<'_>, group: &GroupSpec) -> Result<(BigInt, GroupElement)> {
    let neg = cur.eat('-');
    let starts_digit = cur.peek().is_some_and(|c| c.is_ascii_digit());
    let (coef, elem) = if starts_digit && !cur.eat_identity() {
        let c = cur.unsigned()?;
        if cur.eat('*') {
            (c, word(cur, group)?)
        } else {
            (c, GroupElement::identity())
        }
    } else if starts_digit {
        // consumed a bare identity "1", possibly continuing as a word
        let mut acc = GroupElement::identity();
        while cur.eat('*') {
            let next = word_factor(cur, group)?;
            acc = group.mul(&acc, &next);
        }
        (BigInt::one(), acc)
    } else {
        (BigInt::one(), word(cur, group)?)
    };
    Ok((if neg { -coef } else { coef }, elem))
}

/// Terms of a ring element, uncombined.
pub fn parse_ring_terms(group: &GroupSpec, text: &str) -> Result<Vec<(BigInt, GroupElement)>> {
    parse_ring_terms_at(group, text, 0)
}

fn parse_ring_terms_at(group: &GroupSpec, text: &str, base: usize) -> Result<Vec<(BigInt, GroupElement)>> {
    let mut cur = Cursor::with_base(text, base);
    if cur.at_end() {
        return cur.err("empty ring element");
    }
    let mut terms = vec![ring_term(&mut cur, group)?];
    loop {
        if cur.eat('+') {
            terms.push(ring_term(&mut cur, group)?);
        } else if cur.eat('-') {
            let (c, g) = ring_term(&mut cur, group)?;
            terms.push((-c, g));
        } else {
            break;
        }
    }
    cur.finish()?;
    Ok(terms)
}

/// Coefficient of a Wh term as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    Scalar(BigInt),
    Vector(Vec<BigInt>),
}

impl Coefficient {
    fn negate(self) -> Self {
        match self {
            Coefficient::Scalar(c) => Coefficient::Scalar(-c),
            Coefficient::Vector(v) => Coefficient::Vector(v.into_iter().map(|c| -c).collect()),
        }
    }
}

fn wh_term(cur: &mut Cursor<'_>, group: &GroupSpec) -> Result<(Coefficient, GroupElement)> {
    let neg = cur.eat('-');
    let coef = if cur.eat('(') {
        let mut v = vec![cur.signed()?];
        while cur.eat(',') {
            v.push(cur.signed()?);
        }
        cur.expect(')')?;
        Coefficient::Vector(v)
    } else if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        Coefficient::Scalar(cur.unsigned()?)
    } else {
        Coefficient::Scalar(BigInt::one())
    };
    cur.expect('[')?;
    let g = word(cur, group)?;
    cur.expect(']')?;
    Ok((if neg { coef.negate() } else { coef }, g))
}

/// Terms of a Wh expression, uncombined. `0` is the empty sum.
pub fn parse_wh_terms(group: &GroupSpec, text: &str) -> Result<Vec<(Coefficient, GroupElement)>> {
    let mut cur = Cursor::new(text);
    if cur.at_end() {
        return cur.err("empty expression");
    }
    {
        let mut probe = Cursor::new(text);
        if let Ok(z) = probe.signed() {
            if z.is_zero() && probe.at_end() {
                return Ok(Vec::new());
            }
        }
    }
    let mut terms = vec![wh_term(&mut cur, group)?];
    loop {
        if cur.eat('+') {
            terms.push(wh_term(&mut cur, group)?);
        } else if cur.eat('-') {
            let (c, g) = wh_term(&mut cur, group)?;
            terms.push((c.negate(), g));
        } else {
            break;
        }
    }
    cur.finish()?;
    Ok(terms)
}

/// One generator of an invertible matrix, as written (indices 0-based here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSyntax {
    Elementary {
        row: usize,
        col: usize,
        entry: Vec<(BigInt, GroupElement)>,
    },
    Diagonal {
        index: usize,
        negative: bool,
        element: GroupElement,
    },
}

fn quoted<'a>(cur: &mut Cursor<'a>) -> Result<(&'a str, usize)> {
    cur.expect('"')?;
    let start = cur.pos;
    let col = cur.column();
    match cur.src[start..].find('"') {
        Some(len) => {
            cur.pos = start + len + 1;
            Ok((&cur.src[start..start + len], col - 1))
        }
        None => cur.err("unterminated string"),
    }
}

fn one_based(cur: &mut Cursor<'_>) -> Result<usize> {
    let col = cur.column();
    let i = cur.index()?;
    if i == 0 {
        return Err(Error::parse(col, "indices are 1-based"));
    }
    Ok(i - 1)
}

/// Parses `E(1,2,"t") ; D(1,"-s") ; E(2,1,"1+s")`. An empty string is the
/// empty sequence.
pub fn parse_generators(group: &GroupSpec, text: &str) -> Result<Vec<GeneratorSyntax>> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    if cur.at_end() {
        return Ok(out);
    }
    loop {
        let col = cur.column();
        match cur.ident() {
            Some("E") => {
                cur.expect('(')?;
                let row = one_based(&mut cur)?;
                cur.expect(',')?;
                let col_idx = one_based(&mut cur)?;
                cur.expect(',')?;
                let (body, base) = quoted(&mut cur)?;
                let entry = parse_ring_terms_at(group, body, base)?;
                cur.expect(')')?;
                out.push(GeneratorSyntax::Elementary {
                    row,
                    col: col_idx,
                    entry,
                });
            }
            Some("D") => {
                cur.expect('(')?;
                let index = one_based(&mut cur)?;
                cur.expect(',')?;
                let (body, base) = quoted(&mut cur)?;
                let mut inner = Cursor::with_base(body, base);
                let negative = inner.eat('-');
                if !negative {
                    inner.eat('+');
                }
                let element = word(&mut inner, group)?;
                inner.finish()?;
                cur.expect(')')?;
                out.push(GeneratorSyntax::Diagonal {
                    index,
                    negative,
                    element,
                });
            }
            Some(other) => {
                return Err(Error::parse(
                    col,
                    format!("unknown generator kind '{other}' (expected E or D)"),
                ))
            }
            None => return cur.err("expected E(...) or D(...)"),
        }
        if !cur.eat(';') {
            break;
        }
    }
    cur.finish()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FactorSpec, Group};

    fn g() -> Group {
        Group::new(vec![FactorSpec::free(&["t"]), FactorSpec::cyclic("s", 3)]).unwrap()
    }

    #[test]
    fn words() {
        let g = g();
        let e = parse_group_element(&g, "t*s^2*t^-1").unwrap();
        assert_eq!(g.format(&e), "t*s^2*t^-1");
        assert!(parse_group_element(&g, "1").unwrap().is_identity());
        assert!(parse_group_element(&g, " t * t^-1 ").unwrap().is_identity());
        match parse_group_element(&g, "t*q") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ring_terms() {
        let g = g();
        let t = parse_ring_terms(&g, "2*t + -1*s").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].0, BigInt::from(-1));
        let t = parse_ring_terms(&g, "1+s").unwrap();
        assert!(t[0].1.is_identity());
        let t = parse_ring_terms(&g, "1 - t^2").unwrap();
        assert_eq!(t[1].0, BigInt::from(-1));
        let t = parse_ring_terms(&g, "-3").unwrap();
        assert_eq!(t[0].0, BigInt::from(-3));
        assert!(parse_ring_terms(&g, "").is_err());
    }

    #[test]
    fn wh_expressions() {
        let g = g();
        assert!(parse_wh_terms(&g, "0").unwrap().is_empty());
        let t = parse_wh_terms(&g, "-[t] - [t^-1]").unwrap();
        assert_eq!(t[0].0, Coefficient::Scalar(BigInt::from(-1)));
        assert_eq!(t[1].0, Coefficient::Scalar(BigInt::from(-1)));
        let t = parse_wh_terms(&g, "(1,0)[s*t] + (0,2)[t]").unwrap();
        assert_eq!(t[0].0, Coefficient::Vector(vec![BigInt::from(1), BigInt::from(0)]));
        assert!(parse_wh_terms(&g, "(1)[1]").unwrap()[0].1.is_identity());
    }

    #[test]
    fn generator_sequences() {
        let g = g();
        let gens = parse_generators(&g, r#"E(1,2,"t") ; D(1,"-s") ; E(2,1,"1+s")"#).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(matches!(
            gens[1],
            GeneratorSyntax::Diagonal {
                index: 0,
                negative: true,
                ..
            }
        ));
        assert!(parse_generators(&g, "").unwrap().is_empty());
        assert!(parse_generators(&g, r#"E(0,1,"t")"#).is_err());
        assert!(parse_generators(&g, r#"F(1,2,"t")"#).is_err());
    }
}
