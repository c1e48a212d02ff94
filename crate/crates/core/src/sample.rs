//! Random inputs for property checks and the CLI's seeded self-tests.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::chi::{Cocycle, FiniteQuotient};
use crate::error::Result;
use crate::ghmodules::{GModule, ModuleElement};
use crate::groupring::{MatrixGenerator, RingElement};
use crate::groups::{Group, GroupElement};
use crate::obstruction::LensClass;
use crate::wh1::WhElement;

/// A product of up to `max_letters` random generator powers.
pub fn element<R: Rng + ?Sized>(rng: &mut R, group: &Group, max_letters: usize) -> GroupElement {
    let gens = group.generator_count();
    let mut g = group.identity();
    if gens == 0 {
        return g;
    }
    let len = rng.gen_range(0..=max_letters);
    for _ in 0..len {
        let flat = rng.gen_range(0..gens);
        let mut exp = rng.gen_range(1..=3i64);
        if rng.gen_bool(0.5) {
            exp = -exp;
        }
        let (f, i) = group.unflatten(flat);
        g = group.mul(&g, &group.gen_power(f, i, exp));
    }
    g
}

/// A ring element with at most `max_support` terms and coefficients in
/// `[-bound, bound]`.
pub fn ring_element<R: Rng + ?Sized>(rng: &mut R, group: &Group, max_support: usize, bound: i64) -> RingElement {
    let n = rng.gen_range(0..=max_support);
    let terms: Vec<(BigInt, GroupElement)> = (0..n)
        .map(|_| (BigInt::from(rng.gen_range(-bound..=bound)), element(rng, group, 3)))
        .collect();
    RingElement::from_terms(group, terms)
}

/// A module element with coordinates in `[-bound, bound]`.
pub fn module_element<R: Rng + ?Sized>(rng: &mut R, module: &GModule, bound: i64) -> ModuleElement {
    let coords: Vec<BigInt> = (0..module.rank())
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    module.element(&coords).expect("rank matches")
}

/// Raw, unnormalized `Wh` terms.
pub fn wh_terms<R: Rng + ?Sized>(
    rng: &mut R,
    module: &GModule,
    max_terms: usize,
    bound: i64,
) -> Vec<(ModuleElement, GroupElement)> {
    let n = rng.gen_range(0..=max_terms);
    (0..n)
        .map(|_| (module_element(rng, module, bound), element(rng, module.group(), 4)))
        .collect()
}

pub fn wh_element<R: Rng + ?Sized>(rng: &mut R, module: &Arc<GModule>, max_terms: usize) -> WhElement {
    WhElement::from_terms(module, wh_terms(rng, module, max_terms, 3)).expect("terms are over the module")
}

/// Up to `max_len` generators for `n x n` matrices; elementary entries have
/// support at most `max_support`.
pub fn generators<R: Rng + ?Sized>(
    rng: &mut R,
    group: &Group,
    n: usize,
    max_len: usize,
    max_support: usize,
) -> Vec<MatrixGenerator> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            if n >= 2 && rng.gen_bool(0.7) {
                let row = rng.gen_range(0..n);
                let mut col = rng.gen_range(0..n - 1);
                if col >= row {
                    col += 1;
                }
                MatrixGenerator::Elementary {
                    row,
                    col,
                    entry: ring_element(rng, group, max_support, 2),
                }
            } else {
                MatrixGenerator::DiagonalUnit {
                    index: rng.gen_range(0..n),
                    negative: rng.gen_bool(0.5),
                    element: element(rng, group, 2),
                }
            }
        })
        .collect()
}

/// A random coboundary `delta b`, hence a cocycle.
pub fn coboundary<R: Rng + ?Sized>(
    rng: &mut R,
    quotient: &Arc<FiniteQuotient>,
    module: &Arc<GModule>,
    bound: i64,
) -> Result<Cocycle> {
    let n = quotient.order();
    let b: Vec<ModuleElement> = (0..n * n).map(|_| module_element(rng, module, bound)).collect();
    Cocycle::coboundary(quotient.clone(), module.clone(), &b)
}

/// A lens class with random parts and indices `1 <= k < n <= max_n`.
pub fn lens_class<R: Rng + ?Sized>(rng: &mut R, module: &Arc<GModule>, max_n: u32) -> Result<LensClass> {
    let n = rng.gen_range(2..=max_n.max(2));
    let k = rng.gen_range(1..n);
    let z2 = Arc::new(GModule::z2(module.group()));
    let framing = wh_element(rng, &z2, 2);
    let main = wh_element(rng, module, 3);
    LensClass::new(n, k, framing, main, "random")
}

/// Picks one item uniformly.
pub fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("nonempty choice")
}
