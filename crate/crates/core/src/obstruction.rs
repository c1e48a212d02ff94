//! Index-tagged second-obstruction classes of lens-shaped one-parameter
//! families, with the upside-down involution, the two suspensions, the
//! stable invariant `(-1)^k lambda`, and the retraction invariant
//! `rho = r_*(stable main part)`.
//!
//! An obstruction lives in `Wh1+(G; Z/2 + A)`; it is carried as two parallel
//! [`WhElement`]s, the framing part over `Z/2` and the main part over `A`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ghmodules::{GModule, ModuleElement, ModuleMap};
use crate::groups::GroupElement;
use crate::wh1::{induced_map, WhElement};

/// `a[g] -> (-a)[g^-1]`, normalized.
fn invert_terms(x: &WhElement) -> Result<WhElement> {
    let module = x.module();
    let group = module.group();
    let terms = x
        .terms()
        .iter()
        .map(|(h, a)| Ok((module.neg(a)?, group.inverse(h))))
        .collect::<Result<Vec<_>>>()?;
    WhElement::from_terms(module, terms)
}

fn sign_power(k: u32) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// The obstruction of a lens-shaped family on an `n`-manifold times `I`
/// with critical points of index `k` and `k + 1`. Equality ignores the
/// provenance note.
#[derive(Debug, Clone)]
pub struct LensClass {
    n: u32,
    k: u32,
    framing: WhElement,
    main: WhElement,
    provenance: String,
    extrapolated: bool,
}

impl LensClass {
    /// A class with arbitrary parts; `framing` must be over `Z/2`.
    pub fn new(n: u32, k: u32, framing: WhElement, main: WhElement, provenance: &str) -> Result<LensClass> {
        check_indices(k, n)?;
        main.module().group().ensure_same(framing.module().group())?;
        let out = LensClass {
            n,
            k,
            framing: WhElement::zero(&Arc::new(GModule::z2(main.module().group()))),
            main,
            provenance: provenance.to_string(),
            extrapolated: false,
        };
        out.with_framing(framing)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn framing(&self) -> &WhElement {
        &self.framing
    }

    pub fn main(&self) -> &WhElement {
        &self.main
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Set once the involution has been applied over a module with
    /// nontrivial action, where the coefficient rule is an extrapolation.
    pub fn is_extrapolated(&self) -> bool {
        self.extrapolated
    }

    /// Replaces the framing part; it must be over `Z/2` for the same group.
    pub fn with_framing(mut self, framing: WhElement) -> Result<LensClass> {
        let expected = GModule::z2(self.main.module().group());
        if **framing.module() != expected {
            return Err(Error::Context("framing part must have Z/2 coefficients".into()));
        }
        self.framing = framing;
        Ok(self)
    }
}

impl PartialEq for LensClass {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.k, &self.framing, &self.main) == (other.n, other.k, &other.framing, &other.main)
    }
}

impl Eq for LensClass {}

impl fmt::Display for LensClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} k={} main={} framing={}",
            self.n, self.k, self.main, self.framing
        )
    }
}

fn check_indices(k: u32, n: u32) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::Rejected(format!(
            "lens index k={k} must satisfy 1 <= k <= n-1 for n={n}"
        )));
    }
    Ok(())
}

/// The lens realizing `alpha[sigma]` with zero framing part.
pub fn make_lens(
    module: &Arc<GModule>,
    alpha: &ModuleElement,
    sigma: &GroupElement,
    k: u32,
    n: u32,
) -> Result<LensClass> {
    if sigma.is_identity() {
        return Err(Error::Rejected(
            "sigma is the identity, where every obstruction vanishes".into(),
        ));
    }
    check_indices(k, n)?;
    let main = WhElement::monomial(module, alpha.clone(), sigma.clone())?;
    let z2 = Arc::new(GModule::z2(module.group()));
    Ok(LensClass {
        n,
        k,
        framing: WhElement::zero(&z2),
        main,
        provenance: format!("lens realizing {alpha}[{}]", module.group().format(sigma)),
        extrapolated: false,
    })
}

/// Turning the family upside down: `k -> n - k`, `a[g] -> (-a)[g^-1]`.
pub fn involution(l: &LensClass) -> Result<LensClass> {
    Ok(LensClass {
        n: l.n,
        k: l.n - l.k,
        framing: invert_terms(&l.framing)?,
        main: invert_terms(&l.main)?,
        provenance: format!("involution of ({})", l.provenance),
        extrapolated: l.extrapolated || !l.main.module().is_trivial_action(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suspension {
    Positive,
    Negative,
}

/// `n -> n + 1`; the negative suspension also shifts `k`.
pub fn suspend(l: &LensClass, sign: Suspension) -> LensClass {
    let mut out = l.clone();
    out.n += 1;
    if sign == Suspension::Negative {
        out.k += 1;
    }
    out.provenance = format!(
        "{} suspension of ({})",
        if sign == Suspension::Positive {
            "positive"
        } else {
            "negative"
        },
        l.provenance
    );
    out
}

/// Framing and main parts of a stable obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableObstruction {
    pub framing: WhElement,
    pub main: WhElement,
}

impl StableObstruction {
    pub fn add(&self, other: &StableObstruction) -> Result<StableObstruction> {
        Ok(StableObstruction {
            framing: self.framing.add(&other.framing)?,
            main: self.main.add(&other.main)?,
        })
    }

    pub fn neg(&self) -> StableObstruction {
        StableObstruction {
            framing: self.framing.neg(),
            main: self.main.neg(),
        }
    }
}

/// `(-1)^k` times both parts.
pub fn stable_obstruction(l: &LensClass) -> StableObstruction {
    let s = sign_power(l.k);
    StableObstruction {
        framing: l.framing.scale(&s),
        main: l.main.scale(&s),
    }
}

/// An ordered composite of lens pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoisotopyClass {
    pieces: Vec<LensClass>,
    boundary: bool,
    provenance: String,
}

impl PseudoisotopyClass {
    pub fn single(l: LensClass) -> Self {
        let provenance = l.provenance.clone();
        PseudoisotopyClass {
            pieces: vec![l],
            boundary: false,
            provenance,
        }
    }

    pub fn pieces(&self) -> &[LensClass] {
        &self.pieces
    }

    /// Whether the class is the identity on both ends.
    pub fn boundary(&self) -> bool {
        self.boundary
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }
}

/// `g` followed by its upside-down copy, for the configuration `k = 1`,
/// `n = 3`.
pub fn clam_double(l: &LensClass) -> Result<PseudoisotopyClass> {
    if l.k != 1 || l.n != 3 {
        return Err(Error::Rejected(format!(
            "the doubling construction is set up for k=1, n=3, got k={}, n={}",
            l.k, l.n
        )));
    }
    Ok(PseudoisotopyClass {
        pieces: vec![l.clone(), involution(l)?],
        boundary: true,
        provenance: "composite with its inverse image; pseudoisotopic to the identity after positive suspension".into(),
    })
}

/// Sum of the stable obstructions of the pieces.
pub fn stable_sum(p: &PseudoisotopyClass) -> Result<StableObstruction> {
    let mut pieces = p.pieces.iter();
    let first = pieces
        .next()
        .ok_or_else(|| Error::Invalid("pseudoisotopy class without pieces".into()))?;
    let mut acc = stable_obstruction(first);
    for l in pieces {
        acc = acc.add(&stable_obstruction(l))?;
    }
    Ok(acc)
}

/// `r_*` of the main part of the stable sum, valued in `Wh1+(G; Z)`.
pub fn retraction_invariant(p: &PseudoisotopyClass, r: &ModuleMap) -> Result<WhElement> {
    let t = r.target();
    let is_z = t.rank() == 1 && t.presentation().free_rank() == 1 && t.is_trivial_action();
    if !is_z {
        return Err(Error::Rejected(format!(
            "retraction target {} must be Z with trivial action",
            t.name()
        )));
    }
    induced_map(r, &stable_sum(p)?.main)
}

/// `n * rho` for one `n`, decided explicitly and by the torsion-free shortcut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerEntry {
    pub n: u32,
    pub value: WhElement,
    pub explicit_nontrivial: bool,
    pub shortcut_nontrivial: bool,
}

pub fn power_report(rho: &WhElement, max: u32) -> Vec<PowerEntry> {
    let shortcut = !rho.is_zero();
    (1..=max)
        .map(|n| {
            let value = rho.scale(&BigInt::from(n));
            PowerEntry {
                n,
                explicit_nontrivial: !value.is_zero(),
                shortcut_nontrivial: shortcut,
                value,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircleConclusion {
    /// The mapping class on `M x S^1` is nontrivial, as are all its powers,
    /// while the class is pseudoisotopic to the identity.
    Nontrivial {
        rho: WhElement,
    },
    Inconclusive,
}

impl fmt::Display for CircleConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleConclusion::Nontrivial { .. } => f.write_str("nontrivial"),
            CircleConclusion::Inconclusive => f.write_str("inconclusive by this invariant"),
        }
    }
}

pub fn circle_conclusion(p: &PseudoisotopyClass, r: &ModuleMap) -> Result<CircleConclusion> {
    if !p.boundary {
        return Err(Error::Rejected(
            "closing up needs a class that is the identity on both ends".into(),
        ));
    }
    let rho = retraction_invariant(p, r)?;
    Ok(if rho.is_zero() {
        CircleConclusion::Inconclusive
    } else {
        CircleConclusion::Nontrivial { rho }
    })
}
