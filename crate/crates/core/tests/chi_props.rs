mod common;

use std::sync::Arc;

use common::*;
use num_bigint::BigInt;
use obkit_core::chi::{
    chi_eval, chi_naturality_check, retraction_kills_chi, Cocycle, CocycleCheck, FiniteQuotient, RetractionCheck,
};
use obkit_core::ghmodules::{GModule, ModuleElement, ModuleMap};
use obkit_core::groupring::{build_invertible, InvertiblePair, RingElement, RingMatrix};
use obkit_core::groups::{Group, GroupElement};
use obkit_core::sample;
use obkit_core::wh1::WhElement;
use rand::Rng;

struct Setting {
    group: Group,
    quotient: Arc<FiniteQuotient>,
    modules: Vec<Arc<GModule>>,
}

/// `Z * Z/2` onto `Z/2` killing `t`, with coefficient modules whose action
/// factors through it.
fn setting() -> Setting {
    let g = z_star(2);
    let q = cyclic(2);
    let quotient = Arc::new(FiniteQuotient::new(&g, &q, vec![q.identity(), q.generator("s").unwrap()]).unwrap());
    let modules = vec![
        Arc::new(GModule::integers(&g)),
        Arc::new(GModule::z2(&g)),
        swap_module(&g),
    ];
    Setting {
        group: g,
        quotient,
        modules,
    }
}

/// Independent evaluation of the coboundary of a table at one quadruple.
fn delta_at(c: &Cocycle, q: &Group, quad: [&GroupElement; 4]) -> ModuleElement {
    let m = c.module();
    let [g, h, k, l] = quad;
    let val = |a: &GroupElement, b: &GroupElement, d: &GroupElement| c.value(a, b, d).unwrap().clone();
    // any preimage of g acts the same way; generators and 1 cover Q here
    let src = c.quotient().source();
    let candidates = std::iter::once(src.identity()).chain(src.generators());
    let x = candidates
        .into_iter()
        .find(|x| c.quotient().map(x).unwrap() == *g)
        .expect("a short preimage");
    let acted = m.act(&x, &val(h, k, l)).unwrap();
    let terms = [
        (1, acted),
        (-1, val(&q.mul(g, h), k, l)),
        (1, val(g, &q.mul(h, k), l)),
        (-1, val(g, h, &q.mul(k, l))),
        (1, val(g, h, k)),
    ];
    let mut acc = m.zero();
    for (sign, v) in terms {
        acc = m.add(&acc, &m.scale(&BigInt::from(sign), &v).unwrap()).unwrap();
    }
    acc
}

#[test]
fn verify_agrees_with_direct_coboundary() {
    let s = setting();
    let mut rng = rng(61);
    let q = s.quotient.target().clone();
    let els = s.quotient.elements().to_vec();
    for m in &s.modules {
        for _ in 0..80 {
            let mut entries = Vec::new();
            for a in &els {
                for b in &els {
                    for d in &els {
                        if rng.gen_bool(0.2) {
                            entries.push((
                                [a.clone(), b.clone(), d.clone()],
                                sample::module_element(&mut rng, m, 2),
                            ));
                        }
                    }
                }
            }
            let c = Cocycle::new(s.quotient.clone(), m.clone(), entries).unwrap();
            let mut first = None;
            'outer: for g in &els {
                for h in &els {
                    for k in &els {
                        for l in &els {
                            let d = delta_at(&c, &q, [g, h, k, l]);
                            if !d.is_zero() {
                                first = Some(([g.clone(), h.clone(), k.clone(), l.clone()], d));
                                break 'outer;
                            }
                        }
                    }
                }
            }
            match (c.verify().unwrap(), first) {
                (CocycleCheck::Valid, None) => {}
                (CocycleCheck::Violated { quadruple, defect }, Some((quad, d))) => {
                    assert_eq!(quadruple, quad);
                    assert_eq!(defect, d);
                }
                (got, want) => panic!("verify gave {got:?}, direct evaluation {want:?}"),
            }
        }
    }
}

#[test]
fn coboundaries_are_cocycles() {
    let s = setting();
    let mut rng = rng(62);
    for m in &s.modules {
        for _ in 0..30 {
            let c = sample::coboundary(&mut rng, &s.quotient, m, 4).unwrap();
            assert!(c.verify().unwrap().is_valid());
        }
    }
}

#[test]
fn linearization_is_trilinear() {
    let s = setting();
    let mut rng = rng(63);
    let g = &s.group;
    for m in &s.modules {
        let c = sample::coboundary(&mut rng, &s.quotient, m, 4).unwrap();
        for _ in 0..50 {
            let x = sample::ring_element(&mut rng, g, 4, 3);
            let x2 = sample::ring_element(&mut rng, g, 4, 3);
            let y = sample::ring_element(&mut rng, g, 4, 3);
            let y2 = sample::ring_element(&mut rng, g, 4, 3);
            let z = sample::ring_element(&mut rng, g, 4, 3);
            let z2 = sample::ring_element(&mut rng, g, 4, 3);
            let f = |a: &RingElement, b: &RingElement, d: &RingElement| c.linearize_eval(a, b, d).unwrap();
            let add = |a: ModuleElement, b: ModuleElement| m.add(&a, &b).unwrap();
            assert_eq!(f(&x.add(&x2).unwrap(), &y, &z), add(f(&x, &y, &z), f(&x2, &y, &z)));
            assert_eq!(f(&x, &y.add(&y2).unwrap(), &z), add(f(&x, &y, &z), f(&x, &y2, &z)));
            assert_eq!(f(&x, &y, &z.add(&z2).unwrap()), add(f(&x, &y, &z), f(&x, &y, &z2)));
        }
        // single terms read the table
        let (a, b, d) = (g.parse("t*s").unwrap(), g.parse("s").unwrap(), g.parse("t").unwrap());
        let one = |h: &GroupElement| RingElement::from_group_element(g, h.clone());
        let q = &s.quotient;
        assert_eq!(
            c.linearize_eval(&one(&a), &one(&b), &one(&d)).unwrap(),
            c.value(&q.map(&a).unwrap(), &q.map(&b).unwrap(), &q.map(&d).unwrap())
                .unwrap()
                .clone()
        );
    }
}

fn random_pair<R: Rng>(
    rng: &mut R,
    g: &Group,
    n: usize,
) -> (Vec<obkit_core::groupring::MatrixGenerator>, InvertiblePair) {
    let gens = sample::generators(rng, g, n, 6, 4);
    let pair = build_invertible(g, &gens, n).unwrap();
    (gens, pair)
}

/// Quadruple sum written out directly from the table.
fn chi_by_hand(c: &Cocycle, a: &RingMatrix, b: &RingMatrix, cm: &RingMatrix, d: &RingMatrix) -> WhElement {
    let m = c.module();
    let q = c.quotient();
    let n = a.size();
    let mut raw = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for (ga, na) in a.entry(i, j).terms() {
                        for (gb, nb) in b.entry(j, k).terms() {
                            for (gc, nc) in cm.entry(k, l).terms() {
                                let v = c
                                    .value(&q.map(ga).unwrap(), &q.map(gb).unwrap(), &q.map(gc).unwrap())
                                    .unwrap();
                                for (h, nh) in d.entry(l, i).terms() {
                                    let coeff = na * nb * nc * nh;
                                    raw.push((m.scale(&coeff, v).unwrap(), h.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    WhElement::from_terms(m, raw).unwrap()
}

#[test]
fn chi_identities() {
    let s = setting();
    let mut rng = rng(64);
    let g = &s.group;
    for round in 0..50 {
        let m = &s.modules[round % s.modules.len()];
        let n = 1 + round % 3;
        let c = sample::coboundary(&mut rng, &s.quotient, m, 3).unwrap();
        let id = RingMatrix::identity(g, n);
        assert!(chi_eval(&c, &id, &id, &id, &id).unwrap().is_zero());

        let (ga, pa) = random_pair(&mut rng, g, n);
        let (gb, pb) = random_pair(&mut rng, g, n);
        let (gc, pc) = random_pair(&mut rng, g, n);
        let zero = obkit_core::chi::Cocycle::zero(s.quotient.clone(), m.clone()).unwrap();
        let d1 = build_invertible(g, &[ga, gb, gc].concat(), n).unwrap();
        let (a, b, cm) = (pa.matrix(), pb.matrix(), pc.matrix());
        assert!(chi_eval(&zero, a, b, cm, d1.inverse()).unwrap().is_zero());

        let d2 = pc.inverse().mul(pb.inverse()).unwrap().mul(pa.inverse()).unwrap();
        let v1 = chi_eval(&c, a, b, cm, d1.inverse()).unwrap();
        let v2 = chi_eval(&c, a, b, cm, &d2).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(v1, chi_by_hand(&c, a, b, cm, d1.inverse()));

        // a non-inverse is refused
        if !a.mul(b).unwrap().mul(cm).unwrap().is_identity() {
            assert!(chi_eval(&c, a, b, cm, &id).is_err());
        }
    }
}

#[test]
fn chi_is_natural() {
    let s = setting();
    let mut rng = rng(65);
    let g = &s.group;
    let z = s.modules[0].clone();
    let z2 = s.modules[1].clone();
    let swap = s.modules[2].clone();
    let maps = [
        ModuleMap::new("double", z.clone(), z.clone(), mat(1, &[vec![2]])).unwrap(),
        ModuleMap::new("reduce", z.clone(), z2.clone(), mat(1, &[vec![1]])).unwrap(),
        ModuleMap::new("sum", swap.clone(), z.clone(), mat(2, &[vec![1, 1]])).unwrap(),
        ModuleMap::new("flip", swap.clone(), swap.clone(), mat(2, &[vec![0, 1], vec![1, 0]])).unwrap(),
        ModuleMap::identity(swap.clone()),
        ModuleMap::zero(swap.clone(), z2.clone()).unwrap(),
    ];
    for round in 0..50 {
        let phi = &maps[round % maps.len()];
        let n = 1 + round % 3;
        let c = sample::coboundary(&mut rng, &s.quotient, phi.source(), 3).unwrap();
        let (_, pa) = random_pair(&mut rng, g, n);
        let (_, pb) = random_pair(&mut rng, g, n);
        let (_, pc) = random_pair(&mut rng, g, n);
        let abc = pa.compose(&pb).unwrap().compose(&pc).unwrap();
        assert!(chi_naturality_check(phi, &c, pa.matrix(), pb.matrix(), pc.matrix(), abc.inverse()).unwrap());
    }
}

#[test]
fn retraction_with_kernel_valued_table() {
    let s = setting();
    let g = &s.group;
    let swap = s.modules[2].clone();
    let z = s.modules[0].clone();
    let diff = ModuleMap::new("diff", swap.clone(), z.clone(), mat(2, &[vec![1, 1]])).unwrap();
    // values (1,-1) lie in the kernel of the sum map
    let sq = s.quotient.target().generator("s").unwrap();
    let v = swap.element_i64(&[1, -1]).unwrap();
    let entries = vec![([sq.clone(), sq.clone(), sq.clone()], v)];
    let c = Cocycle::new(s.quotient.clone(), swap.clone(), entries).unwrap();
    let p = build_invertible(g, &sample::generators(&mut rng(66), g, 2, 4, 3), 2).unwrap();
    let id = RingMatrix::identity(g, 2);
    assert_eq!(
        retraction_kills_chi(&diff, &c, p.matrix(), &id, &id, p.inverse()).unwrap(),
        RetractionCheck::Killed
    );
    let ones = Cocycle::new(
        s.quotient.clone(),
        swap.clone(),
        vec![([sq.clone(), sq.clone(), sq], swap.element_i64(&[1, 0]).unwrap())],
    )
    .unwrap();
    assert_eq!(
        retraction_kills_chi(&diff, &ones, &id, &id, &id, &id).unwrap(),
        RetractionCheck::NotCovered
    );
}

#[test]
fn one_by_one_example() {
    // G = Q = Z/2, A = Z/2, A = B = C = D = (s): value c(s,s,s)[s]
    let g = cyclic(2);
    let q = Arc::new(FiniteQuotient::new(&g, &g, g.generators()).unwrap());
    let z2 = Arc::new(GModule::z2(&g));
    let s = g.generator("s").unwrap();
    let c = Cocycle::new(
        q,
        z2.clone(),
        vec![([s.clone(), s.clone(), s.clone()], z2.element_i64(&[1]).unwrap())],
    )
    .unwrap();
    assert!(c.verify().unwrap().is_valid());
    let m = RingMatrix::from_entries(&g, 1, vec![RingElement::from_group_element(&g, s.clone())]).unwrap();
    let v = chi_eval(&c, &m, &m, &m, &m).unwrap();
    assert_eq!(v, WhElement::parse(&z2, "[s]").unwrap());
    let oracle = obkit_core::wh1::WhOracle::new(&z2).unwrap();
    assert_ne!(
        oracle.coordinates(&v).unwrap(),
        oracle.coordinates(&WhElement::zero(&z2)).unwrap()
    );
}
