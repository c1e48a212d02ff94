//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Each check returns a short summary on success. A check that runs past
//! its time budget fails even if every assertion held.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use obkit::commands::{self, equal_pair, mutation_sweep, oracle_coefficients, oracle_group};
use obkit::scenario::{load, Scenario};
use obkit_core::chi::{chi_eval, chi_naturality_check, Cocycle, CocycleCheck, FiniteQuotient};
use obkit_core::ghmodules::{GModule, GModuleSpec, ModuleMap};
use obkit_core::groupring::{build_invertible, verify_inverse, MatrixGenerator, RingMatrix};
use obkit_core::groups::{FactorSpec, Group, GroupElement};
use obkit_core::intlinalg::{determinant, smith_normal_form, IntMatrix, QuotientPresentation};
use obkit_core::obstruction::{
    clam_double, involution, make_lens, power_report, retraction_invariant, stable_obstruction, suspend,
    PseudoisotopyClass, Suspension,
};
use obkit_core::sample;
use obkit_core::wh1::{WhElement, WhOracle};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SCENARIOS: [(&str, &str); 3] = [
    ("paper-F2", include_str!("../scenarios/paper-F2.json")),
    ("paper-Z2", include_str!("../scenarios/paper-Z2.json")),
    ("paper-Z6", include_str!("../scenarios/paper-Z6.json")),
];

fn scenario(text: &str) -> Result<Scenario, String> {
    load(text).map_err(|d| format!("scenario failed to load: {}", d[0]))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn group(factors: Vec<FactorSpec>) -> Group {
    Group::new(factors).expect("valid group")
}

fn z_star(order: u64) -> Group {
    group(vec![FactorSpec::free(&["t"]), FactorSpec::cyclic("s", order)])
}

fn f2() -> Group {
    group(vec![FactorSpec::free(&["t"]), FactorSpec::free(&["u"])])
}

fn mat(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(cols, rows).expect("well-formed matrix")
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `Z^2` with order-2 torsion generators swapping the coordinates.
fn swap_module(g: &Group) -> Arc<GModule> {
    let actions = (0..g.generator_count())
        .map(|flat| {
            let (f, i) = g.unflatten(flat);
            if g.factor(f).torsion_order(i) == Some(2) {
                mat(2, &[vec![0, 1], vec![1, 0]])
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
    Arc::new(GModule::new(g, spec).expect("valid module"))
}

/// Report text of rho for the lens and for its double.
fn expected_rho(name: &str) -> (&'static str, &'static str) {
    match name {
        "paper-F2" => ("-[u]", "-[u] - [u^-1]"),
        "paper-Z2" => ("-[s]", "-2[s]"),
        "paper-Z6" => ("-[s]", "-[s] - [s^5]"),
        _ => unreachable!(),
    }
}

/// Criterion 1: rho of the lens and of its double, exactly, per scenario.
fn headline_values() -> Check {
    let mut notes = Vec::new();
    for (name, text) in SCENARIOS {
        let start = Instant::now();
        let s = scenario(text)?;
        let report = commands::report_paper(&s).map_err(|f| f.message)?;
        let elapsed = start.elapsed();
        let (want_g, want_double) = expected_rho(name);
        ensure!(
            report.get("RHO_G") == Some(want_g),
            "{name}: RHO_G is {:?}",
            report.get("RHO_G")
        );
        ensure!(
            report.get("RHO_DOUBLE") == Some(want_double),
            "{name}: RHO_DOUBLE is {:?}",
            report.get("RHO_DOUBLE")
        );

        // the same values rebuilt from sigma as canonical forms
        let p = s.paper.as_ref().ok_or("no paper section")?;
        let lens = s.lenses.get(&p.lens).ok_or("lens missing")?;
        let r = s.maps.get(&p.retraction).ok_or("retraction missing")?;
        let z = r.target();
        let g = &s.group;
        let sigma = lens.main().terms()[0].0.clone();
        let minus_one = z.element_i64(&[-1]).map_err(|e| e.to_string())?;
        let at_sigma = WhElement::monomial(z, minus_one.clone(), sigma.clone()).map_err(|e| e.to_string())?;
        let at_inverse = WhElement::monomial(z, minus_one, g.inverse(&sigma)).map_err(|e| e.to_string())?;
        let rho_g = retraction_invariant(&PseudoisotopyClass::single(lens.clone()), r).map_err(|e| e.to_string())?;
        let double = clam_double(lens).map_err(|e| e.to_string())?;
        let rho = retraction_invariant(&double, r).map_err(|e| e.to_string())?;
        ensure!(rho_g == at_sigma, "{name}: rho(g) = {rho_g}, expected {at_sigma}");
        let sum = at_sigma.add(&at_inverse).map_err(|e| e.to_string())?;
        ensure!(rho == sum, "{name}: rho(double) = {rho}, expected {sum}");
        ensure!(
            elapsed < Duration::from_secs(1),
            "{name}: report took {:.3}s",
            elapsed.as_secs_f64()
        );
        notes.push(format!("{name} {want_double} in {:.0}ms", elapsed.as_secs_f64() * 1e3));
    }
    Ok(notes.join("; "))
}

/// Criterion 2: every multiple 1..=64 of rho is nonzero.
fn powers_nontrivial() -> Check {
    for (name, text) in SCENARIOS {
        let s = scenario(text)?;
        let p = s.paper.as_ref().ok_or("no paper section")?;
        let lens = s.lenses.get(&p.lens).ok_or("lens missing")?;
        let r = s.maps.get(&p.retraction).ok_or("retraction missing")?;
        let rho = retraction_invariant(&clam_double(lens).map_err(|e| e.to_string())?, r).map_err(|e| e.to_string())?;
        for n in 1..=64i64 {
            let multiple = rho.scale(&BigInt::from(n));
            ensure!(!multiple.is_zero(), "{name}: {n} * rho vanishes");
        }
        let entries = power_report(&rho, 64);
        ensure!(
            entries.len() == 64,
            "{name}: power report has {} entries",
            entries.len()
        );
        for e in &entries {
            ensure!(
                e.explicit_nontrivial && e.shortcut_nontrivial,
                "{name}: power report marks {} trivial",
                e.n
            );
        }
        let report = commands::report_paper(&s).map_err(|f| f.message)?;
        ensure!(
            report.get("POWERS_NONTRIVIAL") == Some("1..64"),
            "{name}: POWERS_NONTRIVIAL is {:?}",
            report.get("POWERS_NONTRIVIAL")
        );
    }
    Ok("3 scenarios x 64 multiples nonzero".into())
}

/// Criterion 3: canonical forms and oracle coordinates decide equality the
/// same way; `Wh(G;Z)` has free rank `|G| - 1`.
fn oracle_equivalence() -> Check {
    const PAIRS: usize = 200;
    let mut rng = rng(3);
    let mut cases = 0;
    let mut equal_total = 0;
    for gt in commands::ORACLE_GROUPS {
        let g = oracle_group(gt).ok_or("unknown group token")?;
        let elements = g.enumerate_elements().map_err(|e| e.to_string())?;
        let classes: std::collections::BTreeSet<GroupElement> =
            elements.iter().map(|x| g.conjugacy_canonical(x)).collect();
        for ct in commands::ORACLE_COEFFICIENTS {
            let m = oracle_coefficients(&g, ct).ok_or("unknown coefficient token")?;
            let oracle = WhOracle::new(&m).map_err(|e| e.to_string())?;
            let (mut equal, mut unequal) = (0, 0);
            for i in 0..PAIRS {
                let (x, y) = if i % 2 == 0 {
                    equal_pair(&mut rng, &m).map_err(|f| f.message)?
                } else {
                    (
                        sample::wh_terms(&mut rng, &m, 5, 3),
                        sample::wh_terms(&mut rng, &m, 5, 3),
                    )
                };
                let wx = WhElement::from_terms(&m, x.clone()).map_err(|e| e.to_string())?;
                let wy = WhElement::from_terms(&m, y.clone()).map_err(|e| e.to_string())?;
                let by_form = wx == wy;
                let by_oracle = oracle.coordinates_of_terms(&x).map_err(|e| e.to_string())?
                    == oracle.coordinates_of_terms(&y).map_err(|e| e.to_string())?;
                ensure!(
                    by_form == by_oracle,
                    "{gt}/{ct}: {wx} vs {wy}: forms say {by_form}, oracle {by_oracle}"
                );
                if by_oracle {
                    equal += 1;
                } else {
                    unequal += 1;
                }
            }
            ensure!(equal > 0 && unequal > 0, "{gt}/{ct}: degenerate sample ({equal} equal)");
            equal_total += equal;
            cases += 1;
            if ct == "Ztrivial" {
                let order = elements.len();
                ensure!(
                    classes.len() == order,
                    "{gt}: {} classes for order {order}",
                    classes.len()
                );
                ensure!(
                    oracle.free_rank() == classes.len() - 1,
                    "{gt}: oracle rank {} but {} classes",
                    oracle.free_rank(),
                    classes.len()
                );
                ensure!(
                    oracle.invariant_factors().iter().all(Zero::is_zero),
                    "{gt}: Wh(G;Z) has torsion {:?}",
                    oracle.invariant_factors()
                );
            }
        }
    }
    Ok(format!(
        "{cases} (G, A) cases x {PAIRS} pairs agree ({equal_total} equal); rank = |G|-1"
    ))
}

struct ChiSetting {
    group: Group,
    quotient: Arc<FiniteQuotient>,
    modules: Vec<Arc<GModule>>,
}

fn chi_setting() -> ChiSetting {
    let g = z_star(2);
    let q = group(vec![FactorSpec::cyclic("s", 2)]);
    let s = q.generator("s").expect("generator");
    let quotient = Arc::new(FiniteQuotient::new(&g, &q, vec![q.identity(), s]).expect("valid quotient"));
    let modules = vec![
        Arc::new(GModule::integers(&g)),
        Arc::new(GModule::z2(&g)),
        swap_module(&g),
    ];
    ChiSetting {
        group: g,
        quotient,
        modules,
    }
}

/// Matrix product of the generators' inverses in reverse order.
fn inverse_from_generators(g: &Group, gens: &[MatrixGenerator], n: usize) -> Result<RingMatrix, String> {
    let mut acc = RingMatrix::identity(g, n);
    for gen in gens.iter().rev() {
        let m = gen.inverse(g).matrix(g, n).map_err(|e| e.to_string())?;
        acc = acc.mul(&m).map_err(|e| e.to_string())?;
    }
    Ok(acc)
}

/// Criterion 4: chi vanishes on identities and on the zero table, is
/// natural, and does not depend on which verified inverse is supplied.
fn chi_identities() -> Check {
    let s = chi_setting();
    let g = &s.group;
    let mut rng = rng(4);
    let err = |e: obkit_core::Error| e.to_string();
    let draw = |rng: &mut ChaCha8Rng, n: usize| -> Result<(Vec<MatrixGenerator>, _), String> {
        let gens = sample::generators(rng, g, n, 6, 4);
        let pair = build_invertible(g, &gens, n).map_err(|e| e.to_string())?;
        Ok((gens, pair))
    };

    for round in 0..50 {
        let m = &s.modules[round % s.modules.len()];
        let n = 1 + round % 3;
        let c = sample::coboundary(&mut rng, &s.quotient, m, 3).map_err(err)?;
        let id = RingMatrix::identity(g, n);
        ensure!(
            chi_eval(&c, &id, &id, &id, &id).map_err(err)?.is_zero(),
            "round {round}: chi(I,I,I) != 0"
        );
        let zero = Cocycle::zero(s.quotient.clone(), m.clone()).map_err(err)?;
        let (ga, pa) = draw(&mut rng, n)?;
        let (gb, pb) = draw(&mut rng, n)?;
        let (gc, pc) = draw(&mut rng, n)?;
        let abc = pa.compose(&pb).map_err(err)?.compose(&pc).map_err(err)?;
        let (a, b, cm, d) = (pa.matrix(), pb.matrix(), pc.matrix(), abc.inverse());
        ensure!(
            chi_eval(&zero, a, b, cm, d).map_err(err)?.is_zero(),
            "round {round}: zero table gives nonzero chi"
        );
        let all: Vec<MatrixGenerator> = [ga, gb, gc].concat();
        let other = inverse_from_generators(g, &all, n)?;
        ensure!(
            verify_inverse(abc.matrix(), &other),
            "round {round}: rebuilt inverse does not verify"
        );
        let v1 = chi_eval(&c, a, b, cm, d).map_err(err)?;
        let v2 = chi_eval(&c, a, b, cm, &other).map_err(err)?;
        ensure!(v1 == v2, "round {round}: chi {v1} with one inverse, {v2} with another");
    }

    let (z, z2, swap) = (s.modules[0].clone(), s.modules[1].clone(), s.modules[2].clone());
    let maps = [
        ModuleMap::new("double", z.clone(), z.clone(), mat(1, &[vec![2]])).map_err(err)?,
        ModuleMap::new("reduce", z.clone(), z2.clone(), mat(1, &[vec![1]])).map_err(err)?,
        ModuleMap::new("sum", swap.clone(), z.clone(), mat(2, &[vec![1, 1]])).map_err(err)?,
        ModuleMap::new("flip", swap.clone(), swap.clone(), mat(2, &[vec![0, 1], vec![1, 0]])).map_err(err)?,
        ModuleMap::identity(swap.clone()),
        ModuleMap::zero(swap, z2).map_err(err)?,
    ];
    for round in 0..50 {
        let phi = &maps[round % maps.len()];
        let n = 1 + round % 3;
        let c = sample::coboundary(&mut rng, &s.quotient, phi.source(), 3).map_err(err)?;
        let (_, pa) = draw(&mut rng, n)?;
        let (_, pb) = draw(&mut rng, n)?;
        let (_, pc) = draw(&mut rng, n)?;
        let abc = pa.compose(&pb).map_err(err)?.compose(&pc).map_err(err)?;
        ensure!(
            chi_naturality_check(phi, &c, pa.matrix(), pb.matrix(), pc.matrix(), abc.inverse()).map_err(err)?,
            "round {round}: naturality fails for {}",
            phi.name()
        );
    }
    Ok("50 identity/zero/inverse rounds, 50 naturality rounds".into())
}

/// Criterion 5: shipped tables are cocycles and every +1 mutation breaks them.
fn cocycle_validation() -> Check {
    let mut notes = Vec::new();
    for (name, text) in SCENARIOS {
        let s = scenario(text)?;
        ensure!(!s.cocycles.is_empty(), "{name}: no cocycles");
        for (cname, c) in s.cocycles.iter() {
            let check = c.verify().map_err(|e| e.to_string())?;
            ensure!(check == CocycleCheck::Valid, "{name}/{cname}: {check:?}");
            ensure!(!c.is_zero_table(), "{name}/{cname}: table is zero");
            let sweep = mutation_sweep(c).map_err(|f| f.message)?;
            ensure!(
                sweep.total > 0 && sweep.rejected == sweep.total,
                "{name}/{cname}: {}/{} mutations rejected, first accepted {:?}",
                sweep.rejected,
                sweep.total,
                sweep.first_accepted
            );
            notes.push(format!("{name}/{cname} {}/{}", sweep.rejected, sweep.total));
        }
    }
    Ok(notes.join(", "))
}

/// Criterion 6: involution, suspensions and the (1,3) flip formula.
fn sign_calculus() -> Check {
    let mut rng = rng(6);
    let mut cases = Vec::new();
    for g in [f2(), z_star(2), z_star(6)] {
        cases.push(Arc::new(GModule::integers(&g)));
        cases.push(Arc::new(GModule::z2(&g)));
        cases.push(swap_module(&g));
    }
    let err = |e: obkit_core::Error| e.to_string();
    for i in 0..100 {
        let m = &cases[i % cases.len()];
        let l = sample::lens_class(&mut rng, m, 9).map_err(err)?;
        let e = involution(&l).map_err(err)?;
        ensure!(involution(&e).map_err(err)? == l, "lens {i}: flipping twice changes it");
        let base = stable_obstruction(&l);
        ensure!(
            stable_obstruction(&suspend(&l, Suspension::Positive)) == base,
            "lens {i}: positive suspension changes the stable class"
        );
        ensure!(
            stable_obstruction(&suspend(&l, Suspension::Negative)) == base.neg(),
            "lens {i}: negative suspension does not negate"
        );
    }
    for i in 0..100 {
        let m = &cases[i % cases.len()];
        let g = m.group();
        let sigma = loop {
            let x = sample::element(&mut rng, g, 4);
            if !x.is_identity() {
                break x;
            }
        };
        let alpha = loop {
            let a = sample::module_element(&mut rng, m, 4);
            if !a.is_zero() {
                break a;
            }
        };
        let l = make_lens(m, &alpha, &sigma, 1, 3).map_err(err)?;
        let e = involution(&l).map_err(err)?;
        let want = WhElement::monomial(m, m.neg(&alpha).map_err(err)?, g.inverse(&sigma)).map_err(err)?;
        ensure!(
            (e.k(), e.n()) == (2, 3),
            "lens {i}: flipped index ({}, {})",
            e.k(),
            e.n()
        );
        ensure!(*e.main() == want, "lens {i}: flip gives {}, expected {want}", e.main());
    }
    Ok("100 random lenses, 100 (k=1, n=3) lenses".into())
}

fn words(gens: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0..gens, -3i64..=3), 0..=max_len)
}

fn law_groups() -> Vec<Group> {
    vec![
        f2(),
        z_star(2),
        z_star(6),
        group(vec![FactorSpec::cyclic("s", 5)]),
        group(vec![FactorSpec::abelian(&[] as &[&str], &[("a", 2), ("b", 2)])]),
        group(vec![FactorSpec::abelian(&["x"], &[("y", 3)])]),
        group(vec![
            FactorSpec::free(&["p", "q"]),
            FactorSpec::cyclic("s", 3),
            FactorSpec::abelian(&["z"], &[("w", 2)]),
        ]),
    ]
}

fn int_matrix(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows).expect("rectangular"))
    })
}

fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..12).prop_map(move |ops| {
        let mut m = IntMatrix::identity(n);
        for (i, j, q) in ops {
            let mut e = IntMatrix::identity(n);
            if i == j {
                e[(i, i)] = -BigInt::one();
            } else {
                e[(i, j)] = BigInt::from(q);
            }
            m = m.mul(&e).expect("square");
        }
        m
    })
}

fn run<S: Strategy>(
    cases: u32,
    label: &str,
    strategy: &S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(strategy, test).map_err(|e| format!("{label}: {e}"))?;
    Ok(cases)
}

/// Criterion 7: the substrate property suites at their stated counts.
fn substrate() -> Check {
    let mut total = 0;
    for g in law_groups() {
        let n = g.generator_count();
        total += run(
            1000,
            &format!("group laws on {g}"),
            &(words(n, 8), words(n, 8), words(n, 8)),
            |(a, b, c)| {
                let (a, b, c) = (g.from_letters(&a), g.from_letters(&b), g.from_letters(&c));
                prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
                prop_assert_eq!(g.mul(&a, &g.identity()), a.clone());
                prop_assert_eq!(g.mul(&g.identity(), &a), a.clone());
                prop_assert!(g.mul(&a, &g.inverse(&a)).is_identity());
                prop_assert!(g.mul(&g.inverse(&a), &a).is_identity());
                Ok(())
            },
        )?;
        total += run(
            500,
            &format!("conjugacy on {g}"),
            &(words(n, 8), words(n, 6)),
            |(x, c)| {
                let (x, c) = (g.from_letters(&x), g.from_letters(&c));
                let y = g.conjugate(&c, &x);
                prop_assert!(g.are_conjugate(&x, &y));
                prop_assert_eq!(g.conjugacy_canonical(&y), g.conjugacy_canonical(&x));
                let (canon, w) = g.canonical_with_witness(&y);
                prop_assert_eq!(g.conjugate(&w, &y), canon);
                Ok(())
            },
        )?;
    }
    total += run(200, "smith postconditions", &int_matrix(8, 20), |m| {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.s.clone());
        prop_assert_eq!(determinant(&s.u).unwrap().abs(), BigInt::one());
        prop_assert_eq!(determinant(&s.v).unwrap().abs(), BigInt::one());
        for i in 0..s.s.rows() {
            for j in 0..s.s.cols() {
                let v = &s.s[(i, j)];
                let on_diagonal = i == j && i < s.rank;
                let shaped = if on_diagonal { v.is_positive() } else { v.is_zero() };
                prop_assert!(shaped, "entry ({}, {}) = {}", i, j, v);
            }
        }
        for i in 1..s.rank {
            prop_assert!((&s.s[(i, i)] % &s.s[(i - 1, i - 1)]).is_zero());
        }
        Ok(())
    })?;
    let moved = (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
        (
            prop::collection::vec(prop::collection::vec(-20i64..=20, c), r)
                .prop_map(move |rows| IntMatrix::from_rows(c, &rows).expect("rectangular")),
            unimodular(r),
            unimodular(c),
        )
    });
    total += run(200, "smith under unimodular change", &moved, |(m, p, q)| {
        let before = smith_normal_form(&m).invariant_factors();
        let after = smith_normal_form(&p.mul(&m).unwrap().mul(&q).unwrap()).invariant_factors();
        prop_assert_eq!(after, before);
        Ok(())
    })?;
    let cosets = (1usize..=5).prop_flat_map(|k| {
        (
            (0usize..=5).prop_flat_map(move |r| {
                prop::collection::vec(prop::collection::vec(-6i64..=6, k), r)
                    .prop_map(move |rows| IntMatrix::from_rows(k, &rows).expect("rectangular"))
            }),
            prop::collection::vec(-30i64..=30, k),
        )
    });
    total += run(256, "coset reduction", &cosets, |(rel, x)| {
        let p = QuotientPresentation::new(rel.cols(), rel).unwrap();
        let x = big(&x);
        let rep = p.representative(&x).unwrap();
        prop_assert_eq!(p.representative(&rep).unwrap(), rep.clone());
        prop_assert_eq!(p.coset_reduce(&rep).unwrap(), p.coset_reduce(&x).unwrap());
        let diff: Vec<BigInt> = x.iter().zip(&rep).map(|(a, b)| a - b).collect();
        prop_assert!(p.is_zero_in_quotient(&diff).unwrap());
        Ok(())
    })?;
    let factors = smith_normal_form(&mat(2, &[vec![2, 4], vec![6, 8]])).invariant_factors();
    ensure!(factors == big(&[2, 4]), "SNF of [[2,4],[6,8]] gives {factors:?}");
    Ok(format!("{total} property cases; SNF [[2,4],[6,8]] = (2, 4)"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "headline rho values",
            budget: Some(Duration::from_secs(3)),
            check: headline_values,
        },
        Criterion {
            id: 2,
            name: "power nontriviality",
            budget: Some(Duration::from_secs(1)),
            check: powers_nontrivial,
        },
        Criterion {
            id: 3,
            name: "oracle equivalence",
            budget: Some(Duration::from_secs(30)),
            check: oracle_equivalence,
        },
        Criterion {
            id: 4,
            name: "chi identities",
            budget: Some(Duration::from_secs(60)),
            check: chi_identities,
        },
        Criterion {
            id: 5,
            name: "cocycle validation",
            budget: None,
            check: cocycle_validation,
        },
        Criterion {
            id: 6,
            name: "sign calculus",
            budget: None,
            check: sign_calculus,
        },
        Criterion {
            id: 7,
            name: "algebra substrate",
            budget: Some(Duration::from_secs(60)),
            check: substrate,
        },
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in criteria.iter().filter(|c| wanted.is_empty() || wanted.contains(&c.id)) {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("over budget ({:.0}s)", b.as_secs_f64())),
            (o, _) => o,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {}: PASS [{secs:.2}s] {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {} {}: FAIL [{secs:.2}s] {why}", c.id, c.name);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
