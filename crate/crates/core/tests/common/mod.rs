#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use obkit_core::ghmodules::{GModule, GModuleSpec};
use obkit_core::groups::{FactorSpec, Group, GroupElement};
use obkit_core::intlinalg::IntMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn group(factors: Vec<FactorSpec>) -> Group {
    Group::new(factors).unwrap()
}

pub fn f2() -> Group {
    group(vec![FactorSpec::free(&["t"]), FactorSpec::free(&["u"])])
}

pub fn z_star(order: u64) -> Group {
    group(vec![FactorSpec::free(&["t"]), FactorSpec::cyclic("s", order)])
}

pub fn cyclic(order: u64) -> Group {
    group(vec![FactorSpec::cyclic("s", order)])
}

pub fn klein() -> Group {
    group(vec![FactorSpec::abelian(&[], &[("a", 2), ("b", 2)])])
}

/// Groups exercised by the law and conjugacy suites.
pub fn law_groups() -> Vec<Group> {
    vec![
        f2(),
        z_star(2),
        z_star(6),
        cyclic(5),
        klein(),
        group(vec![FactorSpec::abelian(&["x"], &[("y", 3)])]),
        group(vec![
            FactorSpec::free(&["p", "q"]),
            FactorSpec::cyclic("s", 3),
            FactorSpec::abelian(&["z"], &[("w", 2)]),
        ]),
    ]
}

/// Finite groups used against brute-force oracles.
pub fn finite_groups() -> Vec<(&'static str, Group)> {
    vec![
        ("Z2", cyclic(2)),
        ("Z3", cyclic(3)),
        ("Z4", cyclic(4)),
        ("Z6", cyclic(6)),
        ("Z2xZ2", klein()),
    ]
}

/// Letters `(flat generator, exponent)` of a random word.
pub fn word(gens: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0..gens, -3i64..=3), 0..=max_len)
}

pub fn element_of(group: &Group, letters: &[(usize, i64)]) -> GroupElement {
    group.from_letters(letters)
}

pub fn mat(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(cols, rows).unwrap()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn trivial_module(group: &Group, name: &str, rank: usize, relations: IntMatrix) -> Arc<GModule> {
    Arc::new(GModule::new(group, GModuleSpec::trivial(group, name, rank, relations)).unwrap())
}

/// Trivial-action coefficient modules `Z`, `Z/2`, `Z^2`.
pub fn trivial_coefficients(group: &Group) -> Vec<(&'static str, Arc<GModule>)> {
    vec![
        ("Z", Arc::new(GModule::integers(group))),
        ("Z/2", Arc::new(GModule::z2(group))),
        ("Z^2", trivial_module(group, "Z^2", 2, IntMatrix::zeros(0, 2))),
    ]
}

/// `Z^2` with every torsion generator of order 2 swapping the coordinates
/// and every other generator acting trivially.
pub fn swap_module(group: &Group) -> Arc<GModule> {
    let swap = mat(2, &[vec![0, 1], vec![1, 0]]);
    let actions = (0..group.generator_count())
        .map(|flat| {
            let (f, g) = group.unflatten(flat);
            if group.factor(f).torsion_order(g) == Some(2) {
                swap.clone()
            } else {
                IntMatrix::identity(2)
            }
        })
        .collect();
    let spec = GModuleSpec {
        name: "swap".into(),
        rank: 2,
        relations: IntMatrix::zeros(0, 2),
        actions,
    };
    Arc::new(GModule::new(group, spec).unwrap())
}

/// `Z^2` on which free generators act by the unipotent `[[1,1],[0,1]]`.
pub fn unipotent_module(group: &Group) -> Arc<GModule> {
    let u = mat(2, &[vec![1, 1], vec![0, 1]]);
    let actions = (0..group.generator_count())
        .map(|flat| {
            let (f, g) = group.unflatten(flat);
            if group.factor(f).torsion_order(g).is_none() {
                u.clone()
            } else {
                IntMatrix::identity(2)
            }
        })
        .collect();
    let spec = GModuleSpec {
        name: "unipotent".into(),
        rank: 2,
        relations: IntMatrix::zeros(0, 2),
        actions,
    };
    Arc::new(GModule::new(group, spec).unwrap())
}
