//! The coinvariant group `Wh1+(G; A) = (A[G] / A[1])_G` of the diagonal
//! action `g(a h) = (g a)(g h g^-1)`.
//!
//! Splitting `A[G]` along conjugacy classes gives
//! `Wh1+(G; A) = sum over classes c != 1 of A_{C(c)}`, the coinvariants of
//! `A` under the centralizer of a representative. [`WhElement`] stores one
//! term per class, keyed by the conjugacy-canonical representative, with the
//! coefficient reduced in `A_{C(c)}`. That makes `==` decide equality for
//! every supported group and action. [`WhOracle`] recomputes the same group
//! for finite `G` directly from the definition.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ghmodules::{GModule, ModuleElement, ModuleMap};
use crate::groups::GroupElement;
use crate::intlinalg::{IntMatrix, QuotientPresentation};
use crate::parse::{parse_wh_terms, Coefficient};

/// An element of `Wh1+(G; A)` in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhElement {
    module: Arc<GModule>,
    terms: Vec<(GroupElement, ModuleElement)>,
}

impl WhElement {
    pub fn zero(module: &Arc<GModule>) -> Self {
        WhElement {
            module: module.clone(),
            terms: Vec::new(),
        }
    }

    /// Normalizes an arbitrary finite sum `sum a_i [h_i]`.
    pub fn from_terms(
        module: &Arc<GModule>,
        terms: impl IntoIterator<Item = (ModuleElement, GroupElement)>,
    ) -> Result<Self> {
        let group = module.group();
        let mut by_class: BTreeMap<GroupElement, Vec<BigInt>> = BTreeMap::new();
        for (a, h) in terms {
            group.check(&h)?;
            if a.rank() != module.rank() {
                return Err(Error::Context(format!(
                    "coefficient of rank {} in a sum over {}",
                    a.rank(),
                    module.name()
                )));
            }
            if h.is_identity() || a.is_zero() {
                continue;
            }
            let (canon, w) = group.canonical_with_witness(&h);
            let a = module.act(&w, &a)?;
            let slot = by_class
                .entry(canon)
                .or_insert_with(|| vec![BigInt::zero(); module.rank()]);
            for (s, x) in slot.iter_mut().zip(a.coords()) {
                *s += x;
            }
        }
        let mut out = Vec::with_capacity(by_class.len());
        for (canon, coords) in by_class {
            let a = reduce_coefficient(module, &canon, &coords)?;
            if !a.is_zero() {
                out.push((canon, a));
            }
        }
        Ok(WhElement {
            module: module.clone(),
            terms: out,
        })
    }

    pub fn monomial(module: &Arc<GModule>, a: ModuleElement, h: GroupElement) -> Result<Self> {
        WhElement::from_terms(module, [(a, h)])
    }

    /// Parses `-[u] - [u^-1]` (rank-1 modules) or `(1,0)[s*t] + (0,2)[t]`.
    pub fn parse(module: &Arc<GModule>, text: &str) -> Result<Self> {
        let raw = parse_wh_terms(module.group(), text)?;
        let mut terms = Vec::with_capacity(raw.len());
        for (c, h) in raw {
            let coords = match c {
                Coefficient::Scalar(n) if module.rank() == 1 => vec![n],
                Coefficient::Scalar(n) => {
                    return Err(Error::Invalid(format!(
                        "scalar coefficient {n} for module {} of rank {}; use a tuple",
                        module.name(),
                        module.rank()
                    )))
                }
                Coefficient::Vector(v) => {
                    if v.len() != module.rank() {
                        return Err(Error::Dimension {
                            expected: module.rank(),
                            found: v.len(),
                        });
                    }
                    v
                }
            };
            terms.push((module.element(&coords)?, h));
        }
        WhElement::from_terms(module, terms)
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    /// `(representative, coefficient)` pairs in ascending representative order.
    pub fn terms(&self) -> &[(GroupElement, ModuleElement)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn raw(&self) -> impl Iterator<Item = (ModuleElement, GroupElement)> + '_ {
        self.terms.iter().map(|(h, a)| (a.clone(), h.clone()))
    }

    fn check_same(&self, other: &WhElement) -> Result<()> {
        if *self.module != *other.module {
            return Err(Error::Context(format!(
                "Wh elements over {} and {}",
                self.module.name(),
                other.module.name()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &WhElement) -> Result<WhElement> {
        self.check_same(other)?;
        WhElement::from_terms(&self.module, self.raw().chain(other.raw()))
    }

    pub fn neg(&self) -> WhElement {
        let m = &self.module;
        let terms = self.raw().map(|(a, h)| (m.neg(&a).expect("rank matches"), h));
        WhElement::from_terms(m, terms).expect("negation stays in context")
    }

    pub fn sub(&self, other: &WhElement) -> Result<WhElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: &BigInt) -> WhElement {
        let m = &self.module;
        let terms = self.raw().map(|(a, h)| (m.scale(n, &a).expect("rank matches"), h));
        WhElement::from_terms(m, terms).expect("scaling stays in context")
    }

    pub fn display(&self) -> String {
        self.to_string()
    }
}

/// Reduces `coords` in the coinvariants of `A` under the centralizer of `canon`.
fn reduce_coefficient(module: &GModule, canon: &GroupElement, coords: &[BigInt]) -> Result<ModuleElement> {
    if module.is_trivial_action() {
        return module.element(coords);
    }
    let gens = module.group().centralizer_generators(canon);
    let p = module.coinvariant_presentation(&gens)?;
    module.element(&p.representative(coords)?)
}

/// Re-normalizes; the identity on values built through this module.
pub fn wh_normal_form(x: &WhElement) -> Result<WhElement> {
    WhElement::from_terms(&x.module, x.raw())
}

impl fmt::Display for WhElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let group = self.module.group();
        let scalar = self.module.rank() == 1;
        for (i, (h, a)) in self.terms.iter().enumerate() {
            let h = group.display(h);
            if scalar {
                let c = &a.coords()[0];
                let sign = if c.is_negative() { "-" } else { "+" };
                match (i, c.is_negative()) {
                    (0, true) => f.write_str("-")?,
                    (0, false) => {}
                    _ => write!(f, " {sign} ")?,
                }
                let mag = c.abs();
                if mag.is_one() {
                    write!(f, "[{h}]")?;
                } else {
                    write!(f, "{mag}[{h}]")?;
                }
            } else {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "{a}[{h}]")?;
            }
        }
        Ok(())
    }
}

/// `sum a_i [h_i] -> sum phi(a_i) [h_i]`. The map must be equivariant, which
/// is what makes it well defined on coinvariants.
pub fn induced_map(phi: &ModuleMap, x: &WhElement) -> Result<WhElement> {
    if **phi.source() != *x.module {
        return Err(Error::Context(format!(
            "map {} has source {}, element lives over {}",
            phi.name(),
            phi.source().name(),
            x.module.name()
        )));
    }
    if !phi.is_equivariant()? {
        return Err(Error::Rejected(format!(
            "map {} is not equivariant, so it does not induce a map on coinvariants",
            phi.name()
        )));
    }
    let mut terms = Vec::with_capacity(x.terms.len());
    for (h, a) in &x.terms {
        terms.push((phi.apply(a)?, h.clone()));
    }
    WhElement::from_terms(phi.target(), terms)
}

/// Whether `phi_*(x)` is nonzero, for `phi` into a trivial-action module. A
/// `true` answer certifies `x != 0`.
pub fn detect_nontrivial(x: &WhElement, phi: &ModuleMap) -> Result<bool> {
    if !phi.target().is_trivial_action() {
        return Err(Error::Rejected(format!(
            "detection needs a trivial-action target, {} is not",
            phi.target().name()
        )));
    }
    Ok(!induced_map(phi, x)?.is_zero())
}

/// `Wh1+(G; A)` for finite `G`, presented from the definition: the quotient
/// of `A (x) Z[G]` by `A (x) 1` and `a (x) h - (g a) (x) (g h g^-1)` for all
/// `g, h` and basis vectors `a`, plus the relations of `A` in every slot.
#[derive(Debug, Clone)]
pub struct WhOracle {
    module: Arc<GModule>,
    elements: Vec<GroupElement>,
    index: BTreeMap<GroupElement, usize>,
    presentation: QuotientPresentation,
}

impl WhOracle {
    pub fn new(module: &Arc<GModule>) -> Result<Self> {
        let group = module.group();
        let elements = group.enumerate_elements()?;
        let index: BTreeMap<GroupElement, usize> = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let k = module.rank();
        let n = elements.len() * k;
        let slot = |h: &GroupElement, i: usize| index[h] * k + i;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let relations = module.presentation().relations();
        for h in &elements {
            for r in 0..relations.rows() {
                let mut row = vec![BigInt::zero(); n];
                for (i, x) in relations.row(r).iter().enumerate() {
                    row[slot(h, i)] = x.clone();
                }
                rows.push(row);
            }
        }
        let identity = group.identity();
        for i in 0..k {
            let mut row = vec![BigInt::zero(); n];
            row[slot(&identity, i)] = BigInt::one();
            rows.push(row);
        }
        for g in &elements {
            let g_inv = group.inverse(g);
            for h in &elements {
                let conj = group.mul(&group.mul(g, h), &g_inv);
                for i in 0..k {
                    let ga = module.act(g, &module.basis(i))?;
                    let mut row = vec![BigInt::zero(); n];
                    row[slot(h, i)] += BigInt::one();
                    for (j, x) in ga.coords().iter().enumerate() {
                        row[slot(&conj, j)] -= x;
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let presentation = QuotientPresentation::new(n, IntMatrix::from_rows(n, &rows)?)?;
        Ok(WhOracle {
            module: module.clone(),
            elements,
            index,
            presentation,
        })
    }

    pub fn presentation(&self) -> &QuotientPresentation {
        &self.presentation
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.presentation.invariant_factors()
    }

    pub fn free_rank(&self) -> usize {
        self.presentation.free_rank()
    }

    pub fn group_order(&self) -> usize {
        self.elements.len()
    }

    /// Canonical coordinates of an unnormalized sum `sum a_i [h_i]`.
    pub fn coordinates_of_terms(&self, terms: &[(ModuleElement, GroupElement)]) -> Result<Vec<BigInt>> {
        let k = self.module.rank();
        let mut v = vec![BigInt::zero(); self.elements.len() * k];
        for (a, h) in terms {
            let Some(&pos) = self.index.get(h) else {
                return Err(Error::Context(format!(
                    "{} is not an element of the enumerated group",
                    self.module.group().format(h)
                )));
            };
            for (i, x) in a.coords().iter().enumerate() {
                v[pos * k + i] += x;
            }
        }
        self.presentation.coset_reduce(&v)
    }

    pub fn coordinates(&self, x: &WhElement) -> Result<Vec<BigInt>> {
        if *x.module != *self.module {
            return Err(Error::Context("oracle built for a different module".into()));
        }
        let terms: Vec<_> = x.raw().collect();
        self.coordinates_of_terms(&terms)
    }
}
