mod common;

use common::*;
use num_bigint::BigInt;
use obkit_core::groupring::{build_invertible, verify_inverse, MatrixGenerator, RingElement, RingMatrix};
use obkit_core::groups::Group;
use obkit_core::sample;

fn ring(g: &Group, s: &str) -> RingElement {
    RingElement::parse(g, s).unwrap()
}

#[test]
fn ring_axioms_on_random_elements() {
    let mut rng = rng(11);
    for g in [f2(), z_star(2), z_star(6)] {
        for _ in 0..300 {
            let x = sample::ring_element(&mut rng, &g, 5, 4);
            let y = sample::ring_element(&mut rng, &g, 5, 4);
            let z = sample::ring_element(&mut rng, &g, 5, 4);
            let one = RingElement::one(&g);
            assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            assert_eq!(
                x.mul(&y.add(&z).unwrap()).unwrap(),
                x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap()
            );
            assert_eq!(
                x.add(&y).unwrap().mul(&z).unwrap(),
                x.mul(&z).unwrap().add(&y.mul(&z).unwrap()).unwrap()
            );
            assert_eq!(x.mul(&one).unwrap(), x);
            assert_eq!(one.mul(&x).unwrap(), x);
            assert!(x.add(&x.neg()).unwrap().is_zero());
            assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        }
    }
}

#[test]
fn noncommutativity_witness() {
    let mut rng = rng(12);
    let g = f2();
    let found = (0..200).any(|_| {
        let x = sample::ring_element(&mut rng, &g, 3, 2);
        let y = sample::ring_element(&mut rng, &g, 3, 2);
        x.mul(&y).unwrap() != y.mul(&x).unwrap()
    });
    assert!(found);
}

/// Entry-by-entry expansion of a 2x2 product, written out by hand.
fn expand2(a: &RingMatrix, b: &RingMatrix) -> RingMatrix {
    let g = a.group();
    let e = |m: &RingMatrix, i, j| m.entry(i, j).clone();
    let cell = |i, j| {
        e(a, i, 0)
            .mul(&e(b, 0, j))
            .unwrap()
            .add(&e(a, i, 1).mul(&e(b, 1, j)).unwrap())
            .unwrap()
    };
    RingMatrix::from_entries(g, 2, vec![cell(0, 0), cell(0, 1), cell(1, 0), cell(1, 1)]).unwrap()
}

#[test]
fn matrix_products_match_hand_expansion() {
    let mut rng = rng(13);
    let g = z_star(2);
    for _ in 0..100 {
        let gens: Vec<RingMatrix> = sample::generators(&mut rng, &g, 2, 3, 3)
            .iter()
            .map(|m| m.matrix(&g, 2).unwrap())
            .collect();
        let mut by_hand = RingMatrix::identity(&g, 2);
        let mut direct = RingMatrix::identity(&g, 2);
        for m in &gens {
            by_hand = expand2(&by_hand, m);
            direct = direct.mul(m).unwrap();
        }
        assert_eq!(by_hand, direct);
    }
}

#[test]
fn elementary_law() {
    let mut rng = rng(14);
    let g = f2();
    for _ in 0..100 {
        let x = sample::ring_element(&mut rng, &g, 4, 3);
        let y = sample::ring_element(&mut rng, &g, 4, 3);
        let e = |v: &RingElement| {
            MatrixGenerator::Elementary {
                row: 0,
                col: 1,
                entry: v.clone(),
            }
            .matrix(&g, 2)
            .unwrap()
        };
        assert_eq!(e(&x).mul(&e(&y)).unwrap(), e(&x.add(&y).unwrap()));
    }
}

#[test]
fn built_pairs_are_two_sided_inverses() {
    let mut rng = rng(15);
    for g in [f2(), z_star(2), z_star(6)] {
        for n in 1..=3 {
            for _ in 0..40 {
                let gens = sample::generators(&mut rng, &g, n, 6, 4);
                let p = build_invertible(&g, &gens, n).unwrap();
                assert!(verify_inverse(p.matrix(), p.inverse()));
                assert!(p.matrix().mul(p.inverse()).unwrap().is_identity());
                assert!(p.inverse().mul(p.matrix()).unwrap().is_identity());
            }
        }
    }
}

#[test]
fn documented_products() {
    let g = group(vec![obkit_core::groups::FactorSpec::free(&["t"])]);
    assert_eq!(ring(&g, "1+t").mul(&ring(&g, "1-t")).unwrap(), ring(&g, "1 - t^2"));
    let h = z_star(2);
    assert!(ring(&h, "t*s").mul(&ring(&h, "s*t^-1")).unwrap().is_one());
    assert_eq!(
        ring(&h, "2*t + -1*s").coefficient(&h.parse("s").unwrap()),
        BigInt::from(-1)
    );
}
