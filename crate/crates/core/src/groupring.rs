//! The integral group ring `Z[G]` and square matrices over it.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};
use crate::parse::{parse_generators, parse_ring_terms, GeneratorSyntax};

/// A finite formal sum `sum n_g g`; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    group: Group,
    terms: BTreeMap<GroupElement, BigInt>,
}

impl RingElement {
    pub fn zero(group: &Group) -> Self {
        RingElement {
            group: group.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &Group) -> Self {
        RingElement::monomial(group, BigInt::one(), group.identity())
    }

    pub fn monomial(group: &Group, coeff: BigInt, g: GroupElement) -> Self {
        let mut r = RingElement::zero(group);
        r.add_term(coeff, g);
        r
    }

    pub fn from_group_element(group: &Group, g: GroupElement) -> Self {
        RingElement::monomial(group, BigInt::one(), g)
    }

    /// Collects like terms; elements are assumed to be over `group`.
    pub fn from_terms(group: &Group, terms: impl IntoIterator<Item = (BigInt, GroupElement)>) -> Self {
        let mut r = RingElement::zero(group);
        for (c, g) in terms {
            r.add_term(c, g);
        }
        r
    }

    pub fn parse(group: &Group, text: &str) -> Result<Self> {
        Ok(RingElement::from_terms(group, parse_ring_terms(group, text)?))
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(g, c)| g.is_identity() && c.is_one())
    }

    /// Terms in ascending group-element order.
    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, g: &GroupElement) -> BigInt {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, coeff: BigInt, g: GroupElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.group.ensure_same(&other.group)?;
        let mut r = self.clone();
        for (g, c) in &other.terms {
            r.add_term(c.clone(), g.clone());
        }
        Ok(r)
    }

    pub fn neg(&self) -> RingElement {
        RingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: &BigInt) -> RingElement {
        if n.is_zero() {
            return RingElement::zero(&self.group);
        }
        RingElement {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * n)).collect(),
        }
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.group.ensure_same(&other.group)?;
        let mut r = RingElement::zero(&self.group);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                r.add_term(a * b, self.group.mul(g, h));
            }
        }
        Ok(r)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if g.is_identity() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", self.group.display(g))?;
            } else {
                write!(f, "{mag}*{}", self.group.display(g))?;
            }
        }
        Ok(())
    }
}

/// An `n x n` matrix over `Z[G]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    group: Group,
    n: usize,
    entries: Vec<RingElement>,
}

impl RingMatrix {
    pub fn zeros(group: &Group, n: usize) -> Self {
        RingMatrix {
            group: group.clone(),
            n,
            entries: vec![RingElement::zero(group); n * n],
        }
    }

    pub fn identity(group: &Group, n: usize) -> Self {
        let mut m = RingMatrix::zeros(group, n);
        for i in 0..n {
            m.entries[i * n + i] = RingElement::one(group);
        }
        m
    }

    pub fn from_entries(group: &Group, n: usize, entries: Vec<RingElement>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                found: entries.len(),
            });
        }
        for e in &entries {
            group.ensure_same(e.group())?;
        }
        Ok(RingMatrix {
            group: group.clone(),
            n,
            entries,
        })
    }

    /// Parses a row-major list of rows of ring-element strings.
    pub fn parse_rows<S: AsRef<str>>(group: &Group, rows: &[Vec<S>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            for s in row {
                entries.push(RingElement::parse(group, s.as_ref())?);
            }
        }
        RingMatrix::from_entries(group, n, entries)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: RingElement) -> Result<()> {
        self.group.ensure_same(value.group())?;
        self.entries[i * self.n + j] = value;
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.entry(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    fn check_compatible(&self, other: &RingMatrix) -> Result<()> {
        self.group.ensure_same(&other.group)?;
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_compatible(other)?;
        let n = self.n;
        let mut out = RingMatrix::zeros(&self.group, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = RingElement::zero(&self.group);
                for k in 0..n {
                    let (a, b) = (self.entry(i, k), other.entry(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(RingMatrix {
            group: self.group.clone(),
            n: self.n,
            entries,
        })
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

/// A generator of the elementary subgroup extended by diagonal units.
/// Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixGenerator {
    /// `I + x e_{row,col}` with `row != col`.
    Elementary { row: usize, col: usize, entry: RingElement },
    /// The identity with `(index, index)` replaced by `+g` or `-g`.
    DiagonalUnit {
        index: usize,
        negative: bool,
        element: GroupElement,
    },
}

impl MatrixGenerator {
    pub fn from_syntax(group: &Group, syntax: GeneratorSyntax) -> MatrixGenerator {
        match syntax {
            GeneratorSyntax::Elementary { row, col, entry } => MatrixGenerator::Elementary {
                row,
                col,
                entry: RingElement::from_terms(group, entry),
            },
            GeneratorSyntax::Diagonal {
                index,
                negative,
                element,
            } => MatrixGenerator::DiagonalUnit {
                index,
                negative,
                element,
            },
        }
    }

    pub fn inverse(&self, group: &Group) -> MatrixGenerator {
        match self {
            MatrixGenerator::Elementary { row, col, entry } => MatrixGenerator::Elementary {
                row: *row,
                col: *col,
                entry: entry.neg(),
            },
            MatrixGenerator::DiagonalUnit {
                index,
                negative,
                element,
            } => MatrixGenerator::DiagonalUnit {
                index: *index,
                negative: *negative,
                element: group.inverse(element),
            },
        }
    }

    pub fn check(&self, group: &Group, n: usize) -> Result<()> {
        match self {
            MatrixGenerator::Elementary { row, col, entry } => {
                if *row >= n || *col >= n {
                    return Err(Error::Invalid(format!(
                        "elementary generator index ({}, {}) outside size {n}",
                        row + 1,
                        col + 1
                    )));
                }
                if row == col {
                    return Err(Error::Invalid(format!(
                        "elementary generator needs distinct indices, got ({}, {})",
                        row + 1,
                        col + 1
                    )));
                }
                group.ensure_same(entry.group())
            }
            MatrixGenerator::DiagonalUnit { index, element, .. } => {
                if *index >= n {
                    return Err(Error::Invalid(format!(
                        "diagonal generator index {} outside size {n}",
                        index + 1
                    )));
                }
                group.check(element)
            }
        }
    }

    /// Renders in the scenario generator syntax.
    pub fn describe(&self, group: &Group) -> String {
        match self {
            MatrixGenerator::Elementary { row, col, entry } => {
                format!("E({},{},\"{}\")", row + 1, col + 1, entry)
            }
            MatrixGenerator::DiagonalUnit {
                index,
                negative,
                element,
            } => format!(
                "D({},\"{}{}\")",
                index + 1,
                if *negative { "-" } else { "" },
                group.format(element)
            ),
        }
    }

    pub fn matrix(&self, group: &Group, n: usize) -> Result<RingMatrix> {
        self.check(group, n)?;
        let mut m = RingMatrix::identity(group, n);
        match self {
            MatrixGenerator::Elementary { row, col, entry } => {
                m.set_entry(*row, *col, entry.clone())?;
            }
            MatrixGenerator::DiagonalUnit {
                index,
                negative,
                element,
            } => {
                let sign = if *negative { -BigInt::one() } else { BigInt::one() };
                m.set_entry(*index, *index, RingElement::monomial(group, sign, element.clone()))?;
            }
        }
        Ok(m)
    }
}

/// How an invertible pair was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Generators(Vec<MatrixGenerator>),
    Explicit,
}

/// A matrix together with a verified two-sided inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertiblePair {
    matrix: RingMatrix,
    inverse: RingMatrix,
    provenance: Provenance,
}

impl InvertiblePair {
    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &RingMatrix {
        &self.inverse
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The pair `(M^-1, M)`.
    pub fn inverted(&self) -> InvertiblePair {
        InvertiblePair {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            provenance: Provenance::Explicit,
        }
    }

    /// Product of two pairs; the inverse is assembled in reverse order.
    pub fn compose(&self, other: &InvertiblePair) -> Result<InvertiblePair> {
        let matrix = self.matrix.mul(&other.matrix)?;
        let inverse = other.inverse.mul(&self.inverse)?;
        if !verify_inverse(&matrix, &inverse) {
            return Err(Error::Internal(
                "product of invertible pairs failed verification".into(),
            ));
        }
        Ok(InvertiblePair {
            matrix,
            inverse,
            provenance: Provenance::Explicit,
        })
    }
}

/// Multiplies out `gens` and their inverses in reverse order.
pub fn build_invertible(group: &Group, gens: &[MatrixGenerator], n: usize) -> Result<InvertiblePair> {
    let mut matrix = RingMatrix::identity(group, n);
    let mut inverse = RingMatrix::identity(group, n);
    for g in gens {
        matrix = matrix.mul(&g.matrix(group, n)?)?;
        inverse = g.inverse(group).matrix(group, n)?.mul(&inverse)?;
    }
    if !verify_inverse(&matrix, &inverse) {
        return Err(Error::Internal(
            "generator product and reversed inverse product do not multiply to the identity".into(),
        ));
    }
    Ok(InvertiblePair {
        matrix,
        inverse,
        provenance: Provenance::Generators(gens.to_vec()),
    })
}

/// Parses the `E(i,j,"x") ; D(i,"-g")` syntax and builds the pair.
pub fn build_invertible_from_text(group: &Group, text: &str, n: usize) -> Result<InvertiblePair> {
    let gens: Vec<MatrixGenerator> = parse_generators(group, text)?
        .into_iter()
        .map(|s| MatrixGenerator::from_syntax(group, s))
        .collect();
    build_invertible(group, &gens, n)
}

/// Accepts a user-supplied inverse after checking both products.
pub fn from_explicit(matrix: RingMatrix, inverse: RingMatrix) -> Result<InvertiblePair> {
    matrix.check_compatible(&inverse)?;
    if !verify_inverse(&matrix, &inverse) {
        return Err(Error::Rejected(
            "supplied inverse does not satisfy M*N = N*M = I".into(),
        ));
    }
    Ok(InvertiblePair {
        matrix,
        inverse,
        provenance: Provenance::Explicit,
    })
}

/// `M*N = N*M = I`. Incompatible operands are never inverse.
pub fn verify_inverse(m: &RingMatrix, n: &RingMatrix) -> bool {
    match (m.mul(n), n.mul(m)) {
        (Ok(a), Ok(b)) => a.is_identity() && b.is_identity(),
        _ => false,
    }
}
