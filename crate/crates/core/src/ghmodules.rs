//! Coefficient modules: finitely presented abelian groups `Z^k / L` with a
//! group acting through integer matrices, and maps between them.
//!
//! Vectors are columns; a generator `x` acts by `a -> M_x a`. Relations are
//! the rows of a matrix spanning `L`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{FactorKind, Group, GroupElement, Piece};
use crate::intlinalg::{solve, IntMatrix, QuotientPresentation};

/// Coordinates of a module element, always stored as the canonical coset
/// representative, so `==` is equality in the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleElement(Vec<BigInt>);

impl ModuleElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Raw module data before validation. `actions` holds one matrix per
/// generator of the group, in flat generator order.
#[derive(Debug, Clone)]
pub struct GModuleSpec {
    pub name: String,
    pub rank: usize,
    pub relations: IntMatrix,
    pub actions: Vec<IntMatrix>,
}

impl GModuleSpec {
    /// All generators act by the identity.
    pub fn trivial(group: &Group, name: &str, rank: usize, relations: IntMatrix) -> Self {
        GModuleSpec {
            name: name.to_string(),
            rank,
            relations,
            actions: vec![IntMatrix::identity(rank); group.generator_count()],
        }
    }
}

/// First failed module axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ActionCount {
        expected: usize,
        found: usize,
    },
    RelationWidth {
        expected: usize,
        found: usize,
    },
    Dimension {
        generator: String,
        rows: usize,
        cols: usize,
    },
    BreaksRelation {
        generator: String,
        relation: usize,
    },
    NotInvertible {
        generator: String,
        basis: usize,
    },
    TorsionOrder {
        generator: String,
        order: u64,
    },
    NotCommuting {
        first: String,
        second: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ActionCount { expected, found } => {
                write!(f, "expected {expected} action matrices, found {found}")
            }
            Violation::RelationWidth { expected, found } => {
                write!(f, "relation rows must have width {expected}, found {found}")
            }
            Violation::Dimension { generator, rows, cols } => {
                write!(
                    f,
                    "action of {generator} is {rows}x{cols}, not square of the module rank"
                )
            }
            Violation::BreaksRelation { generator, relation } => {
                write!(f, "action of {generator} does not preserve relation {}", relation + 1)
            }
            Violation::NotInvertible { generator, basis } => write!(
                f,
                "action of {generator} is not invertible on the quotient (basis vector {} not hit)",
                basis + 1
            ),
            Violation::TorsionOrder { generator, order } => write!(
                f,
                "action of {generator} raised to the power {order} is not the identity"
            ),
            Violation::NotCommuting { first, second } => {
                write!(f, "actions of {first} and {second} do not commute on the quotient")
            }
        }
    }
}

fn congruent(p: &QuotientPresentation, a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    let d = a.sub(b)?;
    for j in 0..d.cols() {
        if !p.is_zero_in_quotient(&d.column(j))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn mat_pow(m: &IntMatrix, e: u64) -> Result<IntMatrix> {
    let mut out = IntMatrix::identity(m.rows());
    for _ in 0..e {
        out = out.mul(m)?;
    }
    Ok(out)
}

/// An integer matrix inducing the inverse of `m` on the quotient, if `m`
/// is surjective there (hence bijective, the module being noetherian).
fn quotient_inverse(p: &QuotientPresentation, m: &IntMatrix) -> Result<std::result::Result<IntMatrix, usize>> {
    let k = p.rank();
    // [M | R^T] z = e_i
    let rt = p.relations().transpose();
    let mut system = IntMatrix::zeros(k, k + rt.cols());
    for i in 0..k {
        for j in 0..k {
            system[(i, j)] = m[(i, j)].clone();
        }
        for j in 0..rt.cols() {
            system[(i, k + j)] = rt[(i, j)].clone();
        }
    }
    let mut inv = IntMatrix::zeros(k, k);
    for i in 0..k {
        let mut e = vec![BigInt::zero(); k];
        e[i] = BigInt::one();
        match solve(&system, &e)? {
            Some(z) => {
                for (r, zr) in z.iter().take(k).enumerate() {
                    inv[(r, i)] = zr.clone();
                }
            }
            None => return Ok(Err(i)),
        }
    }
    Ok(Ok(inv))
}

/// Checks the module axioms; on success returns integer lifts of the
/// inverse actions.
fn check_module(group: &Group, spec: &GModuleSpec) -> Result<std::result::Result<Vec<IntMatrix>, Violation>> {
    let k = spec.rank;
    if spec.actions.len() != group.generator_count() {
        return Ok(Err(Violation::ActionCount {
            expected: group.generator_count(),
            found: spec.actions.len(),
        }));
    }
    if spec.relations.cols() != k {
        return Ok(Err(Violation::RelationWidth {
            expected: k,
            found: spec.relations.cols(),
        }));
    }
    let p = QuotientPresentation::new(k, spec.relations.clone())?;
    let name = |i: usize| group.generator_name(i).to_string();
    for (i, m) in spec.actions.iter().enumerate() {
        if m.rows() != k || m.cols() != k {
            return Ok(Err(Violation::Dimension {
                generator: name(i),
                rows: m.rows(),
                cols: m.cols(),
            }));
        }
    }
    for (i, m) in spec.actions.iter().enumerate() {
        for r in 0..spec.relations.rows() {
            let image = m.apply(spec.relations.row(r))?;
            if !p.is_zero_in_quotient(&image)? {
                return Ok(Err(Violation::BreaksRelation {
                    generator: name(i),
                    relation: r,
                }));
            }
        }
    }
    let mut inverses = Vec::with_capacity(spec.actions.len());
    for (i, m) in spec.actions.iter().enumerate() {
        match quotient_inverse(&p, m)? {
            Ok(inv) => inverses.push(inv),
            Err(basis) => {
                return Ok(Err(Violation::NotInvertible {
                    generator: name(i),
                    basis,
                }))
            }
        }
    }
    for (fi, factor) in group.factors().iter().enumerate() {
        for g in 0..factor.generator_count() {
            if let Some(order) = factor.torsion_order(g) {
                let flat = group.flat_index(fi, g);
                let power = mat_pow(&spec.actions[flat], order)?;
                if !congruent(&p, &power, &IntMatrix::identity(k))? {
                    return Ok(Err(Violation::TorsionOrder {
                        generator: name(flat),
                        order,
                    }));
                }
            }
        }
        if matches!(factor.kind, FactorKind::Abelian { .. }) {
            let n = factor.generator_count();
            for a in 0..n {
                for b in a + 1..n {
                    let (fa, fb) = (group.flat_index(fi, a), group.flat_index(fi, b));
                    let (ma, mb) = (&spec.actions[fa], &spec.actions[fb]);
                    if !congruent(&p, &ma.mul(mb)?, &mb.mul(ma)?)? {
                        return Ok(Err(Violation::NotCommuting {
                            first: name(fa),
                            second: name(fb),
                        }));
                    }
                }
            }
        }
    }
    Ok(Ok(inverses))
}

/// Reports the first violated module axiom, if any.
pub fn validate_module(group: &Group, spec: &GModuleSpec) -> std::result::Result<(), Violation> {
    check_module(group, spec)
        .expect("dimensions are checked before any arithmetic")
        .map(|_| ())
}

/// A validated `G`-module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    name: String,
    group: Group,
    presentation: QuotientPresentation,
    actions: Vec<IntMatrix>,
    inverses: Vec<IntMatrix>,
    trivial: bool,
    elements: BTreeMap<String, ModuleElement>,
}

impl GModule {
    pub fn new(group: &Group, spec: GModuleSpec) -> Result<GModule> {
        let inverses = match check_module(group, &spec)? {
            Ok(inv) => inv,
            Err(v) => return Err(Error::Invalid(format!("module {}: {v}", spec.name))),
        };
        let presentation = QuotientPresentation::new(spec.rank, spec.relations)?;
        let id = IntMatrix::identity(spec.rank);
        let mut trivial = true;
        for m in &spec.actions {
            trivial &= congruent(&presentation, m, &id)?;
        }
        Ok(GModule {
            name: spec.name,
            group: group.clone(),
            presentation,
            actions: spec.actions,
            inverses,
            trivial,
            elements: BTreeMap::new(),
        })
    }

    /// `Z` with trivial action.
    pub fn integers(group: &Group) -> GModule {
        GModule::new(group, GModuleSpec::trivial(group, "Z", 1, IntMatrix::zeros(0, 1)))
            .expect("trivial module is valid")
    }

    /// `Z/2` with trivial action.
    pub fn z2(group: &Group) -> GModule {
        let rel = IntMatrix::from_rows(1, &[vec![2]]).expect("width 1");
        GModule::new(group, GModuleSpec::trivial(group, "Z2", 1, rel)).expect("trivial module is valid")
    }

    /// Registers a named element such as `alpha`.
    pub fn with_element(mut self, name: &str, coords: &[BigInt]) -> Result<GModule> {
        let e = self.element(coords)?;
        self.elements.insert(name.to_string(), e);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }

    pub fn presentation(&self) -> &QuotientPresentation {
        &self.presentation
    }

    pub fn action_matrices(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn is_trivial_action(&self) -> bool {
        self.trivial
    }

    pub fn named(&self, name: &str) -> Option<&ModuleElement> {
        self.elements.get(name)
    }

    pub fn named_elements(&self) -> impl Iterator<Item = (&String, &ModuleElement)> {
        self.elements.iter()
    }

    pub fn element(&self, coords: &[BigInt]) -> Result<ModuleElement> {
        Ok(ModuleElement(self.presentation.representative(coords)?))
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<ModuleElement> {
        let big: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        self.element(&big)
    }

    pub fn zero(&self) -> ModuleElement {
        ModuleElement(vec![BigInt::zero(); self.rank()])
    }

    pub fn basis(&self, i: usize) -> ModuleElement {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        self.element(&v).expect("rank matches")
    }

    fn check(&self, a: &ModuleElement) -> Result<()> {
        if a.rank() != self.rank() {
            return Err(Error::Context(format!(
                "element of rank {} used in module {} of rank {}",
                a.rank(),
                self.name,
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &ModuleElement, b: &ModuleElement) -> Result<ModuleElement> {
        self.check(a)?;
        self.check(b)?;
        let sum: Vec<BigInt> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        self.element(&sum)
    }

    pub fn neg(&self, a: &ModuleElement) -> Result<ModuleElement> {
        self.check(a)?;
        let v: Vec<BigInt> = a.0.iter().map(|x| -x).collect();
        self.element(&v)
    }

    pub fn sub(&self, a: &ModuleElement, b: &ModuleElement) -> Result<ModuleElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn scale(&self, n: &BigInt, a: &ModuleElement) -> Result<ModuleElement> {
        self.check(a)?;
        let v: Vec<BigInt> = a.0.iter().map(|x| x * n).collect();
        self.element(&v)
    }

    /// Integer lift of the action of `g`.
    pub fn action_matrix(&self, g: &GroupElement) -> Result<IntMatrix> {
        self.group.check(g)?;
        let mut m = IntMatrix::identity(self.rank());
        let mut step = |flat: usize, exp: i64| -> Result<()> {
            let base = if exp >= 0 {
                &self.actions[flat]
            } else {
                &self.inverses[flat]
            };
            for _ in 0..exp.unsigned_abs() {
                m = m.mul(base)?;
            }
            Ok(())
        };
        for syl in g.syllables() {
            match &syl.piece {
                Piece::Free(letters) => {
                    for &(gen, exp) in letters {
                        step(self.group.flat_index(syl.factor, gen), exp)?;
                    }
                }
                Piece::Abelian(exps) => {
                    for (gen, &exp) in exps.iter().enumerate() {
                        step(self.group.flat_index(syl.factor, gen), exp)?;
                    }
                }
            }
        }
        Ok(m)
    }

    /// `g . a`, reduced in the quotient.
    pub fn act(&self, g: &GroupElement, a: &ModuleElement) -> Result<ModuleElement> {
        self.check(a)?;
        if self.trivial {
            self.group.check(g)?;
            return Ok(a.clone());
        }
        let m = self.action_matrix(g)?;
        self.element(&m.apply(&a.0)?)
    }

    /// `A / (L + sum_z (M_z - I) Z^k)`: the coinvariants under the subgroup
    /// generated by `gens`.
    pub fn coinvariant_presentation(&self, gens: &[GroupElement]) -> Result<QuotientPresentation> {
        let mut rel = self.presentation.relations().clone();
        if !self.trivial {
            let id = IntMatrix::identity(self.rank());
            for z in gens {
                let d = self.action_matrix(z)?.sub(&id)?;
                for j in 0..d.cols() {
                    let col = d.column(j);
                    if col.iter().any(|x| !x.is_zero()) {
                        rel.push_row(col)?;
                    }
                }
            }
        }
        QuotientPresentation::new(self.rank(), rel)
    }
}

/// A homomorphism of coefficient modules, `a -> M a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    name: String,
    source: Arc<GModule>,
    target: Arc<GModule>,
    matrix: IntMatrix,
}

impl ModuleMap {
    /// Checks that relations go to relations.
    pub fn new(name: &str, source: Arc<GModule>, target: Arc<GModule>, matrix: IntMatrix) -> Result<ModuleMap> {
        source.group().ensure_same(target.group())?;
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::Invalid(format!(
                "map {name} must be {}x{}, got {}x{}",
                target.rank(),
                source.rank(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        let rel = source.presentation().relations();
        for r in 0..rel.rows() {
            let image = matrix.apply(rel.row(r))?;
            if !target.presentation().is_zero_in_quotient(&image)? {
                return Err(Error::Invalid(format!(
                    "map {name} sends relation {} of {} outside the relations of {}",
                    r + 1,
                    source.name(),
                    target.name()
                )));
            }
        }
        Ok(ModuleMap {
            name: name.to_string(),
            source,
            target,
            matrix,
        })
    }

    pub fn identity(module: Arc<GModule>) -> ModuleMap {
        let k = module.rank();
        ModuleMap::new("id", module.clone(), module, IntMatrix::identity(k)).expect("identity is well defined")
    }

    pub fn zero(source: Arc<GModule>, target: Arc<GModule>) -> Result<ModuleMap> {
        let m = IntMatrix::zeros(target.rank(), source.rank());
        ModuleMap::new("0", source, target, m)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<GModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GModule> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &ModuleElement) -> Result<ModuleElement> {
        self.source.check(a)?;
        self.target.element(&self.matrix.apply(a.coords())?)
    }

    /// Whether the map commutes with every generator's action.
    pub fn is_equivariant(&self) -> Result<bool> {
        let group = self.source.group();
        for g in group.generators() {
            for i in 0..self.source.rank() {
                let e = self.source.basis(i);
                let lhs = self.apply(&self.source.act(&g, &e)?)?;
                let rhs = self.target.act(&g, &self.apply(&e)?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if *first.target != *self.source {
            return Err(Error::Context(format!(
                "cannot compose {} after {}: {} is not {}",
                self.name,
                first.name,
                first.target.name(),
                self.source.name()
            )));
        }
        ModuleMap::new(
            &format!("{}.{}", self.name, first.name),
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix)?,
        )
    }
}
