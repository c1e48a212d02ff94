//! Free products of free groups and finitely generated abelian groups.
//!
//! An element is stored in alternating-syllable normal form: a list of
//! syllables, each a non-identity element of one factor, with adjacent
//! syllables in distinct factors. Free-factor syllables are letter-power
//! words `x^a y^b ...` with no adjacent letters on the same generator;
//! abelian-factor syllables are exponent vectors with torsion exponents
//! reduced into `[0, m)`. Equality of elements is equality of normal forms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorKind {
    Free { rank: usize },
    Abelian { free_rank: usize, torsion: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpec {
    pub kind: FactorKind,
    /// One name per generator. For abelian factors the free generators come
    /// first, then one per torsion order.
    pub names: Vec<String>,
}

impl FactorSpec {
    pub fn free<S: AsRef<str>>(names: &[S]) -> Self {
        FactorSpec {
            kind: FactorKind::Free { rank: names.len() },
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    pub fn abelian<S: AsRef<str>>(free: &[S], torsion: &[(S, u64)]) -> Self {
        let mut names: Vec<String> = free.iter().map(|s| s.as_ref().to_string()).collect();
        names.extend(torsion.iter().map(|(s, _)| s.as_ref().to_string()));
        FactorSpec {
            kind: FactorKind::Abelian {
                free_rank: free.len(),
                torsion: torsion.iter().map(|(_, m)| *m).collect(),
            },
            names,
        }
    }

    /// `Z/m` on one generator.
    pub fn cyclic(name: &str, order: u64) -> Self {
        FactorSpec::abelian::<&str>(&[], &[(name, order)])
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, FactorKind::Abelian { free_rank: 0, .. })
    }

    /// Order of an abelian torsion generator; `None` for free generators.
    pub fn torsion_order(&self, gen: usize) -> Option<u64> {
        match &self.kind {
            FactorKind::Abelian { free_rank, torsion } if gen >= *free_rank => torsion.get(gen - free_rank).copied(),
            _ => None,
        }
    }

    fn expected_names(&self) -> usize {
        match &self.kind {
            FactorKind::Free { rank } => *rank,
            FactorKind::Abelian { free_rank, torsion } => free_rank + torsion.len(),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A validated free product of factors.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    factors: Vec<FactorSpec>,
    offsets: Vec<usize>,
    lookup: HashMap<String, (usize, usize)>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for GroupSpec {}

impl GroupSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("a group needs at least one factor".into()));
        }
        let mut lookup = HashMap::new();
        let mut offsets = Vec::with_capacity(factors.len());
        let mut offset = 0;
        for (fi, factor) in factors.iter().enumerate() {
            match &factor.kind {
                FactorKind::Free { rank } if *rank == 0 => {
                    return Err(Error::Invalid(format!("free factor {fi} has rank 0")));
                }
                FactorKind::Abelian { torsion, .. } => {
                    if let Some(m) = torsion.iter().find(|m| **m < 2) {
                        return Err(Error::Invalid(format!("factor {fi}: torsion order {m} is below 2")));
                    }
                }
                _ => {}
            }
            if factor.names.len() != factor.expected_names() {
                return Err(Error::Invalid(format!(
                    "factor {fi}: expected {} generator names, got {}",
                    factor.expected_names(),
                    factor.names.len()
                )));
            }
            for (gi, name) in factor.names.iter().enumerate() {
                if !is_identifier(name) {
                    return Err(Error::Invalid(format!("bad generator name '{name}'")));
                }
                if lookup.insert(name.clone(), (fi, gi)).is_some() {
                    return Err(Error::Invalid(format!("duplicate generator name '{name}'")));
                }
            }
            offsets.push(offset);
            offset += factor.generator_count();
        }
        Ok(GroupSpec {
            factors,
            offsets,
            lookup,
        })
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> &FactorSpec {
        &self.factors[index]
    }

    /// Total number of generators over all factors.
    pub fn generator_count(&self) -> usize {
        self.factors.iter().map(FactorSpec::generator_count).sum()
    }

    /// Flat generator index of generator `gen` of factor `factor`.
    pub fn flat_index(&self, factor: usize, gen: usize) -> usize {
        self.offsets[factor] + gen
    }

    /// Inverse of [`GroupSpec::flat_index`].
    pub fn unflatten(&self, flat: usize) -> (usize, usize) {
        let factor = self.offsets.partition_point(|&o| o <= flat) - 1;
        (factor, flat - self.offsets[factor])
    }

    pub fn generator_name(&self, flat: usize) -> &str {
        let (f, g) = self.unflatten(flat);
        &self.factors[f].names[g]
    }

    pub fn lookup(&self, name: &str) -> Option<(usize, usize)> {
        self.lookup.get(name).copied()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].is_finite()
    }

    pub fn order(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        match &self.factors[0].kind {
            FactorKind::Abelian { torsion, .. } => Some(torsion.iter().product()),
            FactorKind::Free { .. } => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity()
    }

    /// The generator `gen` of factor `factor`, as an element.
    pub fn gen(&self, factor: usize, gen: usize) -> GroupElement {
        self.gen_power(factor, gen, 1)
    }

    pub fn generator(&self, name: &str) -> Result<GroupElement> {
        let (f, g) = self
            .lookup(name)
            .ok_or_else(|| Error::Invalid(format!("unknown generator '{name}'")))?;
        Ok(self.gen(f, g))
    }

    /// All generators in flat order.
    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.generator_count())
            .map(|flat| {
                let (f, g) = self.unflatten(flat);
                self.gen(f, g)
            })
            .collect()
    }

    pub fn gen_power(&self, factor: usize, gen: usize, exp: i64) -> GroupElement {
        let piece = match &self.factors[factor].kind {
            FactorKind::Free { .. } => {
                if exp == 0 {
                    return GroupElement::identity();
                }
                Piece::Free(vec![(gen, exp)])
            }
            FactorKind::Abelian { .. } => {
                let mut exps = vec![0; self.factors[factor].generator_count()];
                exps[gen] = exp;
                self.normalize_abelian(factor, &mut exps);
                let p = Piece::Abelian(exps);
                if p.is_identity() {
                    return GroupElement::identity();
                }
                p
            }
        };
        GroupElement {
            syllables: vec![Syllable { factor, piece }],
        }
    }

    /// Product of `flat_generator ^ exponent` letters, left to right.
    pub fn from_letters(&self, letters: &[(usize, i64)]) -> GroupElement {
        let mut out = Vec::new();
        for &(flat, exp) in letters {
            let (f, g) = self.unflatten(flat);
            for s in self.gen_power(f, g, exp).syllables {
                self.push_syllable(&mut out, s);
            }
        }
        GroupElement { syllables: out }
    }

    /// Abelian-factor element from an exponent vector (torsion exponents are
    /// reduced).
    pub fn abelian_element(&self, factor: usize, exps: &[i64]) -> Result<GroupElement> {
        let spec = &self.factors[factor];
        if !matches!(spec.kind, FactorKind::Abelian { .. }) {
            return Err(Error::Invalid(format!("factor {factor} is not abelian")));
        }
        if exps.len() != spec.generator_count() {
            return Err(Error::Dimension {
                expected: spec.generator_count(),
                found: exps.len(),
            });
        }
        let mut e = exps.to_vec();
        self.normalize_abelian(factor, &mut e);
        let piece = Piece::Abelian(e);
        if piece.is_identity() {
            return Ok(GroupElement::identity());
        }
        Ok(GroupElement {
            syllables: vec![Syllable { factor, piece }],
        })
    }

    fn normalize_abelian(&self, factor: usize, exps: &mut [i64]) {
        let spec = &self.factors[factor];
        for (gen, e) in exps.iter_mut().enumerate() {
            if let Some(m) = spec.torsion_order(gen) {
                *e = e.rem_euclid(m as i64);
            }
        }
    }

    fn piece_mul(&self, factor: usize, a: &Piece, b: &Piece) -> Piece {
        match (a, b) {
            (Piece::Free(x), Piece::Free(y)) => {
                let mut out = x.clone();
                for &(g, e) in y {
                    push_letter(&mut out, g, e);
                }
                Piece::Free(out)
            }
            (Piece::Abelian(x), Piece::Abelian(y)) => {
                let mut e: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                self.normalize_abelian(factor, &mut e);
                Piece::Abelian(e)
            }
            _ => unreachable!("factor {factor} holds pieces of one kind"),
        }
    }

    fn piece_inv(&self, factor: usize, a: &Piece) -> Piece {
        match a {
            Piece::Free(w) => Piece::Free(w.iter().rev().map(|&(g, e)| (g, -e)).collect()),
            Piece::Abelian(x) => {
                let mut e: Vec<i64> = x.iter().map(|v| -v).collect();
                self.normalize_abelian(factor, &mut e);
                Piece::Abelian(e)
            }
        }
    }

    fn push_syllable(&self, out: &mut Vec<Syllable>, s: Syllable) {
        if out.last().is_some_and(|last| last.factor == s.factor) {
            let last = out.pop().expect("checked non-empty");
            let merged = self.piece_mul(s.factor, &last.piece, &s.piece);
            if !merged.is_identity() {
                out.push(Syllable {
                    factor: s.factor,
                    piece: merged,
                });
            }
        } else {
            out.push(s);
        }
    }

    /// Product `g * h`. Both must be elements of this group.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let mut out = g.syllables.clone();
        for s in &h.syllables {
            self.push_syllable(&mut out, s.clone());
        }
        GroupElement { syllables: out }
    }

    /// Like [`GroupSpec::mul`], but first checks both operands belong here.
    pub fn try_mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        GroupElement {
            syllables: g
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    factor: s.factor,
                    piece: self.piece_inv(s.factor, &s.piece),
                })
                .collect(),
        }
    }

    pub fn pow(&self, g: &GroupElement, exp: i64) -> GroupElement {
        let base = if exp < 0 { self.inverse(g) } else { g.clone() };
        let mut acc = GroupElement::identity();
        for _ in 0..exp.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// `c * g * c^-1`.
    pub fn conjugate(&self, c: &GroupElement, g: &GroupElement) -> GroupElement {
        self.mul(&self.mul(c, g), &self.inverse(c))
    }

    /// Checks that `g` is a well-formed normal form over this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let bad = |msg: String| Err(Error::Context(msg));
        for (i, s) in g.syllables.iter().enumerate() {
            let Some(spec) = self.factors.get(s.factor) else {
                return bad(format!("syllable {i} refers to missing factor {}", s.factor));
            };
            if i > 0 && g.syllables[i - 1].factor == s.factor {
                return bad(format!("syllables {} and {i} share a factor", i - 1));
            }
            if s.piece.is_identity() {
                return bad(format!("syllable {i} is the identity"));
            }
            match (&spec.kind, &s.piece) {
                (FactorKind::Free { rank }, Piece::Free(w)) => {
                    for (j, &(gen, e)) in w.iter().enumerate() {
                        if gen >= *rank || e == 0 || (j > 0 && w[j - 1].0 == gen) {
                            return bad(format!("syllable {i} is not a reduced word"));
                        }
                    }
                }
                (FactorKind::Abelian { .. }, Piece::Abelian(e)) => {
                    if e.len() != spec.generator_count() {
                        return bad(format!("syllable {i} has the wrong arity"));
                    }
                    for (gen, v) in e.iter().enumerate() {
                        if let Some(m) = spec.torsion_order(gen) {
                            if *v < 0 || *v >= m as i64 {
                                return bad(format!("syllable {i} has an unreduced exponent"));
                            }
                        }
                    }
                }
                _ => return bad(format!("syllable {i} does not match its factor kind")),
            }
        }
        Ok(())
    }

    /// Returns `(core, conjugator)` with `g = conjugator * core * conjugator^-1`
    /// and `core` cyclically reduced: its first and last syllables lie in
    /// different factors, and a one-syllable free core has first and last
    /// letters on different generators.
    pub fn cyclically_reduce(&self, g: &GroupElement) -> (GroupElement, GroupElement) {
        let mut syl = g.syllables.clone();
        let mut conj = GroupElement::identity();
        // g = first * mid * last = first * (mid * last * first) * first^-1
        while syl.len() >= 2 && syl[0].factor == syl[syl.len() - 1].factor {
            let first = syl.remove(0);
            let last = syl.pop().expect("len >= 2");
            let merged = self.piece_mul(first.factor, &last.piece, &first.piece);
            conj = self.mul(
                &conj,
                &GroupElement {
                    syllables: vec![first.clone()],
                },
            );
            if !merged.is_identity() {
                syl.push(Syllable {
                    factor: first.factor,
                    piece: merged,
                });
            }
        }
        if syl.len() == 1 {
            if let Piece::Free(word) = &syl[0].piece {
                let factor = syl[0].factor;
                let mut w = word.clone();
                while w.len() >= 2 && w[0].0 == w[w.len() - 1].0 {
                    let first = w.remove(0);
                    let last = w.pop().expect("len >= 2");
                    conj = self.mul(&conj, &free_syllable(factor, vec![first]));
                    if last.1 + first.1 != 0 {
                        w.push((first.0, last.1 + first.1));
                    }
                }
                syl = if w.is_empty() {
                    Vec::new()
                } else {
                    vec![Syllable {
                        factor,
                        piece: Piece::Free(w),
                    }]
                };
            }
        }
        (GroupElement { syllables: syl }, conj)
    }

    /// Canonical representative of the conjugacy class of `g`.
    pub fn conjugacy_canonical(&self, g: &GroupElement) -> GroupElement {
        self.canonical_with_witness(g).0
    }

    /// Returns `(canon, w)` with `canon = w * g * w^-1` the canonical
    /// representative of the class of `g`.
    ///
    /// The representative is the least rotation (syllable rotation for cores
    /// of two or more syllables, block rotation for a one-syllable free word)
    /// of the cyclically reduced core.
    pub fn canonical_with_witness(&self, g: &GroupElement) -> (GroupElement, GroupElement) {
        let (core, c) = self.cyclically_reduce(g);
        let c_inv = self.inverse(&c);
        match core.syllables.len() {
            0 => (GroupElement::identity(), GroupElement::identity()),
            1 => {
                let factor = core.syllables[0].factor;
                match &core.syllables[0].piece {
                    Piece::Abelian(_) => (core, c_inv),
                    Piece::Free(word) => {
                        let i = least_rotation(word);
                        let prefix = free_syllable(factor, word[..i].to_vec());
                        let rotated: Vec<(usize, i64)> = word[i..].iter().chain(&word[..i]).copied().collect();
                        let w = self.mul(&self.inverse(&prefix), &c_inv);
                        (free_syllable(factor, rotated), w)
                    }
                }
            }
            _ => {
                let syl = &core.syllables;
                let i = least_rotation(syl);
                let prefix = GroupElement {
                    syllables: syl[..i].to_vec(),
                };
                let rotated = GroupElement {
                    syllables: syl[i..].iter().chain(&syl[..i]).cloned().collect(),
                };
                let w = self.mul(&self.inverse(&prefix), &c_inv);
                (rotated, w)
            }
        }
    }

    pub fn are_conjugate(&self, g: &GroupElement, h: &GroupElement) -> bool {
        self.conjugacy_canonical(g) == self.conjugacy_canonical(h)
    }

    /// Generators of the centralizer of a canonical representative.
    ///
    /// In a free product the centralizer of a non-identity element of an
    /// abelian factor is that factor; of a free-factor element it is the
    /// cyclic group on its root; of a cyclically reduced element of two or
    /// more syllables it is the cyclic group on its syllable-period root.
    pub fn centralizer_generators(&self, canon: &GroupElement) -> Vec<GroupElement> {
        match canon.syllables.len() {
            0 => self.generators(),
            1 => {
                let factor = canon.syllables[0].factor;
                match &canon.syllables[0].piece {
                    Piece::Abelian(_) => (0..self.factors[factor].generator_count())
                        .map(|g| self.gen(factor, g))
                        .collect(),
                    Piece::Free(word) if word.len() == 1 => vec![self.gen(factor, word[0].0)],
                    Piece::Free(word) => {
                        vec![free_syllable(factor, word[..period(word)].to_vec())]
                    }
                }
            }
            _ => {
                let syl = &canon.syllables;
                vec![GroupElement {
                    syllables: syl[..period(syl)].to_vec(),
                }]
            }
        }
    }

    /// Every element of a finite group (one abelian factor with no free
    /// part), identity first.
    pub fn enumerate_elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::Unsupported("element enumeration needs a finite group".into()));
        }
        let FactorKind::Abelian { torsion, .. } = &self.factors[0].kind else {
            unreachable!("finite groups are abelian here");
        };
        let mut out = Vec::new();
        let mut exps = vec![0i64; torsion.len()];
        loop {
            out.push(self.abelian_element(0, &exps)?);
            // mixed-radix increment, last generator fastest
            let mut i = torsion.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                exps[i] += 1;
                if exps[i] < torsion[i] as i64 {
                    break;
                }
                exps[i] = 0;
            }
        }
    }

    pub fn display<'a>(&'a self, g: &'a GroupElement) -> ElementDisplay<'a> {
        ElementDisplay { group: self, elem: g }
    }

    /// Renders an element in the word grammar, e.g. `t*s^2*t^-1`.
    pub fn format(&self, g: &GroupElement) -> String {
        self.display(g).to_string()
    }

    pub fn parse(&self, text: &str) -> Result<GroupElement> {
        crate::parse::parse_group_element(self, text)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            match &factor.kind {
                FactorKind::Free { .. } => write!(f, "<{}>", factor.names.join(", "))?,
                FactorKind::Abelian { free_rank, torsion } => {
                    let rels: Vec<String> = torsion
                        .iter()
                        .enumerate()
                        .map(|(j, m)| format!("{}^{m}", factor.names[free_rank + j]))
                        .collect();
                    if rels.is_empty() {
                        write!(f, "Ab<{}>", factor.names.join(", "))?;
                    } else {
                        write!(f, "Ab<{} | {}>", factor.names.join(", "), rels.join(", "))?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn push_letter(w: &mut Vec<(usize, i64)>, gen: usize, exp: i64) {
    if let Some(last) = w.last_mut() {
        if last.0 == gen {
            last.1 += exp;
            if last.1 == 0 {
                w.pop();
            }
            return;
        }
    }
    if exp != 0 {
        w.push((gen, exp));
    }
}

fn free_syllable(factor: usize, word: Vec<(usize, i64)>) -> GroupElement {
    if word.is_empty() {
        return GroupElement::identity();
    }
    GroupElement {
        syllables: vec![Syllable {
            factor,
            piece: Piece::Free(word),
        }],
    }
}

fn cmp_rotations<T: Ord>(items: &[T], i: usize, j: usize) -> Ordering {
    let n = items.len();
    for t in 0..n {
        let c = items[(i + t) % n].cmp(&items[(j + t) % n]);
        if c != Ordering::Equal {
            return c;
        }
    }
    Ordering::Equal
}

fn least_rotation<T: Ord>(items: &[T]) -> usize {
    (0..items.len())
        .min_by(|&i, &j| cmp_rotations(items, i, j))
        .unwrap_or(0)
}

/// Smallest `p` dividing `len` such that the sequence is `p`-periodic.
fn period<T: Eq>(items: &[T]) -> usize {
    let n = items.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|t| items[t] == items[t - p]))
        .unwrap_or(n)
}

/// Shared handle to a [`GroupSpec`].
#[derive(Debug, Clone)]
pub struct Group(Arc<GroupSpec>);

impl Group {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Group> {
        Ok(Group(Arc::new(GroupSpec::new(factors)?)))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.0
    }

    /// Errors unless both handles describe the same group.
    pub fn ensure_same(&self, other: &Group) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "elements of {} and {} cannot be combined",
                self.0, other.0
            )))
        }
    }
}

impl From<GroupSpec> for Group {
    fn from(spec: GroupSpec) -> Self {
        Group(Arc::new(spec))
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Group {}

impl Deref for Group {
    type Target = GroupSpec;

    fn deref(&self) -> &GroupSpec {
        &self.0
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Body of a syllable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Piece {
    /// Letter-power word `(generator, nonzero exponent)` with no two adjacent
    /// letters on the same generator.
    Free(Vec<(usize, i64)>),
    /// Exponent per generator of the factor.
    Abelian(Vec<i64>),
}

impl Piece {
    pub fn is_identity(&self) -> bool {
        match self {
            Piece::Free(w) => w.is_empty(),
            Piece::Abelian(e) => e.iter().all(|v| *v == 0),
        }
    }
}

// Exponents order by absolute value, positive before negative: 1 < -1 < 2 ...
fn exp_key(e: i64) -> (u64, bool) {
    (e.unsigned_abs(), e < 0)
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Piece::Free(a), Piece::Free(b)) => a
                .iter()
                .map(|&(g, e)| (g, exp_key(e)))
                .cmp(b.iter().map(|&(g, e)| (g, exp_key(e)))),
            (Piece::Abelian(a), Piece::Abelian(b)) => a.iter().map(|&e| exp_key(e)).cmp(b.iter().map(|&e| exp_key(e))),
            (Piece::Free(_), Piece::Abelian(_)) => Ordering::Less,
            (Piece::Abelian(_), Piece::Free(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub factor: usize,
    pub piece: Piece,
}

/// Element of a free product, in normal form. Comparisons are meaningful
/// only between elements of the same group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupElement {
    syllables: Vec<Syllable>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }
}

/// Syllable count first, then lexicographic on syllables.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.syllables
            .len()
            .cmp(&other.syllables.len())
            .then_with(|| self.syllables.cmp(&other.syllables))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct ElementDisplay<'a> {
    group: &'a GroupSpec,
    elem: &'a GroupElement,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_identity() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut letter = |f: &mut fmt::Formatter<'_>, name: &str, e: i64| {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                f.write_str(name)
            } else {
                write!(f, "{name}^{e}")
            }
        };
        for s in &self.elem.syllables {
            let names = &self.group.factors[s.factor].names;
            match &s.piece {
                Piece::Free(w) => {
                    for &(g, e) in w {
                        letter(f, &names[g], e)?;
                    }
                }
                Piece::Abelian(exps) => {
                    for (g, &e) in exps.iter().enumerate() {
                        if e != 0 {
                            letter(f, &names[g], e)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
