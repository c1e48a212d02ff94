//! 3-cocycles pulled back from finite abelian quotients, their trilinear
//! extension to the group ring, and the chain-level functional
//!
//! `chi(A, B, C) = sum_{i,j,k,l} f(a_ij, b_jk, c_kl) [d_li]`,  `D = (ABC)^-1`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ghmodules::{GModule, ModuleElement, ModuleMap};
use crate::groupring::{verify_inverse, RingElement, RingMatrix};
use crate::groups::{FactorKind, Group, GroupElement, Piece};
use crate::intlinalg::IntMatrix;
use crate::wh1::{induced_map, WhElement};

/// A homomorphism from `G` onto (or into) a finite abelian group `Q`,
/// given by the images of the generators of `G`.
#[derive(Debug, Clone)]
pub struct FiniteQuotient {
    source: Group,
    target: Group,
    images: Vec<GroupElement>,
    elements: Vec<GroupElement>,
    index: BTreeMap<GroupElement, usize>,
    product: Vec<usize>,
}

impl FiniteQuotient {
    pub fn new(source: &Group, target: &Group, images: Vec<GroupElement>) -> Result<Self> {
        let single_finite_abelian =
            target.factors().len() == 1 && matches!(target.factor(0).kind, FactorKind::Abelian { free_rank: 0, .. });
        if !single_finite_abelian {
            return Err(Error::Invalid(format!(
                "quotient target {target} must be a single finite abelian factor"
            )));
        }
        if images.len() != source.generator_count() {
            return Err(Error::Invalid(format!(
                "quotient needs {} generator images, got {}",
                source.generator_count(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            target
                .check(img)
                .map_err(|e| Error::Invalid(format!("image of {}: {e}", source.generator_name(i))))?;
        }
        for (fi, factor) in source.factors().iter().enumerate() {
            for g in 0..factor.generator_count() {
                if let Some(order) = factor.torsion_order(g) {
                    let flat = source.flat_index(fi, g);
                    let p = target.pow(&images[flat], order as i64);
                    if !p.is_identity() {
                        return Err(Error::Invalid(format!(
                            "{} has order {order} but its image {} does not",
                            source.generator_name(flat),
                            target.format(&images[flat])
                        )));
                    }
                }
            }
        }
        let elements = target.enumerate_elements()?;
        let index: BTreeMap<GroupElement, usize> = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let n = elements.len();
        let mut product = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                product.push(index[&target.mul(a, b)]);
            }
        }
        Ok(FiniteQuotient {
            source: source.clone(),
            target: target.clone(),
            images,
            elements,
            index,
            product,
        })
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements of `Q`, identity first.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn index_of(&self, q: &GroupElement) -> Result<usize> {
        self.index
            .get(q)
            .copied()
            .ok_or_else(|| Error::Context(format!("{} is not in the quotient", self.target.format(q))))
    }

    fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order() + b]
    }

    pub fn map(&self, g: &GroupElement) -> Result<GroupElement> {
        self.source.check(g)?;
        let mut out = self.target.identity();
        for syl in g.syllables() {
            let letters: Vec<(usize, i64)> = match &syl.piece {
                Piece::Free(l) => l.clone(),
                Piece::Abelian(e) => e.iter().copied().enumerate().collect(),
            };
            for (gen, exp) in letters {
                let img = &self.images[self.source.flat_index(syl.factor, gen)];
                out = self.target.mul(&out, &self.target.pow(img, exp));
            }
        }
        Ok(out)
    }

    pub fn map_index(&self, g: &GroupElement) -> Result<usize> {
        self.index_of(&self.map(g)?)
    }

    /// For each element of `Q` reached from the identity by generator
    /// images, a preimage in `G`; `None` where unreachable.
    fn lifts(&self) -> Vec<Option<GroupElement>> {
        let mut lifts = vec![None; self.order()];
        lifts[0] = Some(self.source.identity());
        let mut queue = VecDeque::from([0usize]);
        let gens = self.source.generators();
        while let Some(q) = queue.pop_front() {
            for (gen, img) in gens.iter().zip(&self.images) {
                let next = self.mul_idx(q, self.index[img]);
                if lifts[next].is_none() {
                    let lift = self.source.mul(lifts[q].as_ref().expect("visited"), gen);
                    lifts[next] = Some(lift);
                    queue.push_back(next);
                }
            }
        }
        lifts
    }

    pub fn is_surjective(&self) -> bool {
        self.lifts().iter().all(Option::is_some)
    }
}

/// Outcome of checking the cocycle identity over `Q^4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CocycleCheck {
    Valid,
    Violated {
        quadruple: [GroupElement; 4],
        defect: ModuleElement,
    },
}

impl CocycleCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CocycleCheck::Valid)
    }
}

/// A function `c: Q^3 -> A`, pulled back to `G` along a [`FiniteQuotient`].
/// The action of `G` on `A` must factor through `Q`.
#[derive(Debug, Clone)]
pub struct Cocycle {
    quotient: Arc<FiniteQuotient>,
    module: Arc<GModule>,
    /// Action matrix of each element of `Q`.
    q_action: Vec<IntMatrix>,
    table: Vec<ModuleElement>,
}

impl Cocycle {
    /// Builds the table from explicit entries; omitted triples are zero.
    pub fn new(
        quotient: Arc<FiniteQuotient>,
        module: Arc<GModule>,
        entries: Vec<([GroupElement; 3], ModuleElement)>,
    ) -> Result<Self> {
        quotient.source().ensure_same(module.group())?;
        let q_action = action_through_quotient(&quotient, &module)?;
        let n = quotient.order();
        let mut table = vec![module.zero(); n * n * n];
        let mut seen = vec![false; n * n * n];
        for ([a, b, c], v) in entries {
            let pos = (quotient.index_of(&a)? * n + quotient.index_of(&b)?) * n + quotient.index_of(&c)?;
            if seen[pos] {
                let t = quotient.target();
                return Err(Error::Invalid(format!(
                    "cocycle entry ({}, {}, {}) given twice",
                    t.format(&a),
                    t.format(&b),
                    t.format(&c)
                )));
            }
            if v.rank() != module.rank() {
                return Err(Error::Dimension {
                    expected: module.rank(),
                    found: v.rank(),
                });
            }
            seen[pos] = true;
            table[pos] = v;
        }
        Ok(Cocycle {
            quotient,
            module,
            q_action,
            table,
        })
    }

    /// `delta b (g,h,k) = g b(h,k) - b(gh,k) + b(g,hk) - b(g,h)` for a
    /// 2-cochain given row-major over `Q x Q`.
    pub fn coboundary(quotient: Arc<FiniteQuotient>, module: Arc<GModule>, b: &[ModuleElement]) -> Result<Self> {
        let n = quotient.order();
        if b.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                found: b.len(),
            });
        }
        let mut c = Cocycle::zero(quotient, module)?;
        let m = c.module.clone();
        let q = c.quotient.clone();
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let mut v = c.act_q(g, &b[h * n + k])?;
                    v = m.sub(&v, &b[q.mul_idx(g, h) * n + k])?;
                    v = m.add(&v, &b[g * n + q.mul_idx(h, k)])?;
                    v = m.sub(&v, &b[g * n + h])?;
                    let pos = c.pos(g, h, k);
                    c.table[pos] = v;
                }
            }
        }
        Ok(c)
    }

    pub fn zero(quotient: Arc<FiniteQuotient>, module: Arc<GModule>) -> Result<Self> {
        Cocycle::new(quotient, module, Vec::new())
    }

    pub fn quotient(&self) -> &Arc<FiniteQuotient> {
        &self.quotient
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    fn pos(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.quotient.order();
        (a * n + b) * n + c
    }

    pub fn value(&self, a: &GroupElement, b: &GroupElement, c: &GroupElement) -> Result<&ModuleElement> {
        let q = &self.quotient;
        Ok(&self.table[self.pos(q.index_of(a)?, q.index_of(b)?, q.index_of(c)?)])
    }

    pub fn is_zero_table(&self) -> bool {
        self.table.iter().all(ModuleElement::is_zero)
    }

    /// Nonzero entries in table order.
    pub fn entries(&self) -> Vec<([GroupElement; 3], ModuleElement)> {
        let q = self.quotient.elements();
        let n = q.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = &self.table[self.pos(a, b, c)];
                    if !v.is_zero() {
                        out.push(([q[a].clone(), q[b].clone(), q[c].clone()], v.clone()));
                    }
                }
            }
        }
        out
    }

    /// The same table with `delta` added at one triple.
    pub fn with_added(&self, triple: [usize; 3], delta: &ModuleElement) -> Result<Cocycle> {
        let mut out = self.clone();
        let pos = self.pos(triple[0], triple[1], triple[2]);
        out.table[pos] = self.module.add(&self.table[pos], delta)?;
        Ok(out)
    }

    fn act_q(&self, q: usize, a: &ModuleElement) -> Result<ModuleElement> {
        if self.module.is_trivial_action() {
            return Ok(a.clone());
        }
        self.module.element(&self.q_action[q].apply(a.coords())?)
    }

    /// Exhaustive check of
    /// `g c(h,k,l) - c(gh,k,l) + c(g,hk,l) - c(g,h,kl) + c(g,h,k) = 0`.
    pub fn verify(&self) -> Result<CocycleCheck> {
        let q = &self.quotient;
        let n = q.order();
        let m = &self.module;
        for g in 0..n {
            for h in 0..n {
                let gh = q.mul_idx(g, h);
                for k in 0..n {
                    let hk = q.mul_idx(h, k);
                    for l in 0..n {
                        let kl = q.mul_idx(k, l);
                        let mut d = self.act_q(g, &self.table[self.pos(h, k, l)])?;
                        d = m.sub(&d, &self.table[self.pos(gh, k, l)])?;
                        d = m.add(&d, &self.table[self.pos(g, hk, l)])?;
                        d = m.sub(&d, &self.table[self.pos(g, h, kl)])?;
                        d = m.add(&d, &self.table[self.pos(g, h, k)])?;
                        if !d.is_zero() {
                            let e = q.elements();
                            return Ok(CocycleCheck::Violated {
                                quadruple: [e[g].clone(), e[h].clone(), e[k].clone(), e[l].clone()],
                                defect: d,
                            });
                        }
                    }
                }
            }
        }
        Ok(CocycleCheck::Valid)
    }

    /// `phi o c`; `phi` must be equivariant.
    pub fn push_forward(&self, phi: &ModuleMap) -> Result<Cocycle> {
        if **phi.source() != *self.module {
            return Err(Error::Context(format!(
                "map {} does not start at {}",
                phi.name(),
                self.module.name()
            )));
        }
        if !phi.is_equivariant()? {
            return Err(Error::Rejected(format!("map {} is not equivariant", phi.name())));
        }
        let q_action = action_through_quotient(&self.quotient, phi.target())?;
        let table = self.table.iter().map(|v| phi.apply(v)).collect::<Result<Vec<_>>>()?;
        Ok(Cocycle {
            quotient: self.quotient.clone(),
            module: phi.target().clone(),
            q_action,
            table,
        })
    }

    /// Coefficients of `x` summed over each fiber of `G -> Q`.
    fn collapse(&self, x: &RingElement) -> Result<Vec<BigInt>> {
        self.quotient.source().ensure_same(x.group())?;
        let mut out = vec![BigInt::default(); self.quotient.order()];
        for (g, c) in x.terms() {
            out[self.quotient.map_index(g)?] += c;
        }
        Ok(out)
    }

    fn eval_collapsed(&self, x: &[BigInt], y: &[BigInt], z: &[BigInt]) -> Result<ModuleElement> {
        let mut acc = vec![BigInt::default(); self.module.rank()];
        for (a, ca) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, cb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let cab = ca * cb;
                for (c, cc) in z.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let v = &self.table[self.pos(a, b, c)];
                    if v.is_zero() {
                        continue;
                    }
                    let coeff = &cab * cc;
                    for (s, t) in acc.iter_mut().zip(v.coords()) {
                        *s += &coeff * t;
                    }
                }
            }
        }
        self.module.element(&acc)
    }

    /// Trilinear extension `f(x, y, z) = sum x_g y_h z_k c(q g, q h, q k)`.
    pub fn linearize_eval(&self, x: &RingElement, y: &RingElement, z: &RingElement) -> Result<ModuleElement> {
        self.eval_collapsed(&self.collapse(x)?, &self.collapse(y)?, &self.collapse(z)?)
    }
}

/// Action matrices of `Q` on `A`, checking that the action of `G` factors
/// through `Q`.
fn action_through_quotient(q: &FiniteQuotient, module: &GModule) -> Result<Vec<IntMatrix>> {
    let k = module.rank();
    if module.is_trivial_action() {
        return Ok(vec![IntMatrix::identity(k); q.order()]);
    }
    let lifts = q.lifts();
    let Some(lifts) = lifts.into_iter().collect::<Option<Vec<_>>>() else {
        return Err(Error::Rejected(format!(
            "the action on {} is nontrivial and the quotient map is not surjective",
            module.name()
        )));
    };
    let mats = lifts
        .iter()
        .map(|g| module.action_matrix(g))
        .collect::<Result<Vec<_>>>()?;
    let same = |a: &IntMatrix, b: &IntMatrix| -> Result<bool> {
        let d = a.sub(b)?;
        for j in 0..k {
            if !module.presentation().is_zero_in_quotient(&d.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for (flat, g) in module.group().generators().iter().enumerate() {
        let image = q.map_index(g)?;
        if !same(&module.action_matrix(g)?, &mats[image])? {
            return Err(Error::Rejected(format!(
                "the action of {} on {} does not factor through the quotient",
                module.group().generator_name(flat),
                module.name()
            )));
        }
    }
    for a in 0..q.order() {
        for b in 0..q.order() {
            if !same(&mats[a].mul(&mats[b])?, &mats[q.mul_idx(a, b)])? {
                return Err(Error::Rejected(format!(
                    "the action on {} does not factor through the quotient",
                    module.name()
                )));
            }
        }
    }
    Ok(mats)
}

/// `sum_{i,j,k,l} f(a_ij, b_jk, c_kl) [d_li]` with brackets extended
/// bilinearly over the support of `d_li`. `d` must be a two-sided inverse
/// of `ABC`.
pub fn chi_eval(c: &Cocycle, a: &RingMatrix, b: &RingMatrix, cm: &RingMatrix, d: &RingMatrix) -> Result<WhElement> {
    let abc = a.mul(b)?.mul(cm)?;
    if !verify_inverse(&abc, d) {
        return Err(Error::Rejected("D is not a two-sided inverse of ABC".into()));
    }
    c.quotient.source().ensure_same(a.group())?;
    let n = a.size();
    let module = &c.module;
    let collapse_all = |m: &RingMatrix| -> Result<Vec<Vec<BigInt>>> {
        (0..n * n).map(|p| c.collapse(m.entry(p / n, p % n))).collect()
    };
    let (qa, qb, qc) = (collapse_all(a)?, collapse_all(b)?, collapse_all(cm)?);
    let mut terms = Vec::new();
    for i in 0..n {
        for l in 0..n {
            let dli = d.entry(l, i);
            if dli.is_zero() {
                continue;
            }
            let mut f = module.zero();
            for j in 0..n {
                if a.entry(i, j).is_zero() {
                    continue;
                }
                for k in 0..n {
                    let v = c.eval_collapsed(&qa[i * n + j], &qb[j * n + k], &qc[k * n + l])?;
                    f = module.add(&f, &v)?;
                }
            }
            if f.is_zero() {
                continue;
            }
            for (h, nh) in dli.terms() {
                terms.push((module.scale(nh, &f)?, h.clone()));
            }
        }
    }
    WhElement::from_terms(module, terms)
}

/// `phi_*(chi_c(A, B, C)) == chi_{phi o c}(A, B, C)`.
pub fn chi_naturality_check(
    phi: &ModuleMap,
    c: &Cocycle,
    a: &RingMatrix,
    b: &RingMatrix,
    cm: &RingMatrix,
    d: &RingMatrix,
) -> Result<bool> {
    let lhs = induced_map(phi, &chi_eval(c, a, b, cm, d)?)?;
    let rhs = chi_eval(&c.push_forward(phi)?, a, b, cm, d)?;
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RetractionCheck {
    /// `r o c` is the zero table and the pushed-forward value vanishes.
    Killed,
    /// `r o c` is the zero table yet the value does not vanish: a defect.
    NotKilled(WhElement),
    /// `r o c` is not the zero table; the chain-level check does not apply.
    NotCovered,
}

impl fmt::Display for RetractionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RetractionCheck::Killed => f.write_str("killed"),
            RetractionCheck::NotKilled(x) => write!(f, "not killed ({x})"),
            RetractionCheck::NotCovered => f.write_str("not covered by chain-level check"),
        }
    }
}

/// Whether `r_*` annihilates `chi_c(A, B, C)`, decided at chain level when
/// every table value lies in the kernel of `r`.
pub fn retraction_kills_chi(
    r: &ModuleMap,
    c: &Cocycle,
    a: &RingMatrix,
    b: &RingMatrix,
    cm: &RingMatrix,
    d: &RingMatrix,
) -> Result<RetractionCheck> {
    let pushed = c.push_forward(r)?;
    if !pushed.is_zero_table() {
        return Ok(RetractionCheck::NotCovered);
    }
    let value = chi_eval(&pushed, a, b, cm, d)?;
    Ok(if value.is_zero() {
        RetractionCheck::Killed
    } else {
        RetractionCheck::NotKilled(value)
    })
}
