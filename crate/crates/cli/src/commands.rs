//! Command implementations. Each returns a [`Report`] or a [`Failure`]
//! carrying the exit status.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use obkit_core::chi::{chi_eval, chi_naturality_check, retraction_kills_chi, Cocycle, CocycleCheck};
use obkit_core::ghmodules::{GModule, GModuleSpec, ModuleElement, ModuleMap};
use obkit_core::groupring::{InvertiblePair, RingElement};
use obkit_core::groups::{FactorSpec, Group, GroupElement};
use obkit_core::intlinalg::IntMatrix;
use obkit_core::obstruction::{
    circle_conclusion, clam_double, involution, power_report, retraction_invariant, stable_obstruction, stable_sum,
    suspend, CircleConclusion, LensClass, PseudoisotopyClass, Suspension,
};
use obkit_core::sample;
use obkit_core::wh1::{detect_nontrivial, induced_map, WhElement, WhOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Failure, Report};
use crate::scenario::{describe_group, Assertion, Scenario};

type Outcome = Result<Report, Failure>;

/// Unnormalized `sum a_i [h_i]`.
pub type Terms = Vec<(ModuleElement, GroupElement)>;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list(group: &Group, gs: &[GroupElement]) -> String {
    if gs.is_empty() {
        return "none".into();
    }
    gs.iter().map(|g| group.format(g)).collect::<Vec<_>>().join(", ")
}

/// The context used when no scenario is given: `G = <t>`, coefficients `Z`.
pub fn default_scenario() -> Scenario {
    let group = Group::new(vec![FactorSpec::free(&["t"])]).expect("valid group");
    Scenario::over("default", group)
}

pub fn normalize(s: &Scenario, text: &str, ring: bool) -> Outcome {
    let mut r = Report::new();
    r.line("GROUP", describe_group(&s.group));
    r.line("INPUT", text);
    if ring {
        let x = RingElement::parse(&s.group, text)?;
        r.line("NORMAL_FORM", &x);
        r.line("SUPPORT", x.support_len());
    } else {
        let g = s.group_element(text)?;
        r.line("NORMAL_FORM", s.group.format(&g));
        r.line("IDENTITY", yes_no(g.is_identity()));
    }
    Ok(r)
}

pub fn conjugacy(s: &Scenario, a: &str, b: &str) -> Outcome {
    let g = &s.group;
    let x = s.group_element(a)?;
    let y = s.group_element(b)?;
    let (cx, wx) = g.canonical_with_witness(&x);
    let (cy, wy) = g.canonical_with_witness(&y);
    let mut r = Report::new();
    r.line("CANONICAL_1", g.format(&cx));
    r.line("CANONICAL_2", g.format(&cy));
    r.line("CONJUGATE", yes_no(cx == cy));
    if cx == cy {
        // wx x wx^-1 = cx = wy y wy^-1
        let w = g.mul(&g.inverse(&wy), &wx);
        if g.conjugate(&w, &x) != y {
            return Err(Failure::new(
                crate::report::Status::Internal,
                "conjugating witness does not conjugate",
            ));
        }
        r.line("WITNESS", g.format(&w));
    }
    r.line("CENTRALIZER_1", list(g, &g.centralizer_generators(&cx)));
    Ok(r)
}

fn module<'a>(s: &'a Scenario, name: &str) -> Result<&'a Arc<GModule>, Failure> {
    s.modules
        .get(name)
        .ok_or_else(|| Failure::invalid(format!("undeclared module \"{name}\"")))
}

fn map<'a>(s: &'a Scenario, name: &str) -> Result<&'a ModuleMap, Failure> {
    s.maps
        .get(name)
        .ok_or_else(|| Failure::invalid(format!("undeclared map \"{name}\"")))
}

pub fn wh_normalize(s: &Scenario, module_name: &str, text: &str) -> Outcome {
    let m = module(s, module_name)?;
    let x = WhElement::parse(m, text)?;
    let mut r = Report::new();
    r.line("MODULE", m.name());
    r.line("RESULT", &x);
    Ok(r)
}

pub fn wh_detect(s: &Scenario, module_name: Option<&str>, map_name: &str, text: &str) -> Outcome {
    let phi = map(s, map_name)?;
    let source = match module_name {
        Some(n) => module(s, n)?.clone(),
        None => phi.source().clone(),
    };
    let x = WhElement::parse(&source, text)?;
    let image = induced_map(phi, &x)?;
    let detected = detect_nontrivial(&x, phi)?;
    let mut r = Report::new();
    r.line("MODULE", source.name());
    r.line("NORMAL_FORM", &x);
    r.line("MAP", phi.name());
    r.line("IMAGE", &image);
    r.line("DETECTED", yes_no(detected));
    Ok(r)
}

/// Result of adding `+1` in every coordinate at every triple of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSweep {
    pub total: usize,
    pub rejected: usize,
    /// First mutation (triple of quotient elements, coordinate) that still
    /// passed the cocycle check.
    pub first_accepted: Option<([GroupElement; 3], usize)>,
}

pub fn mutation_sweep(c: &Cocycle) -> Result<MutationSweep, Failure> {
    let q = c.quotient();
    let n = q.order();
    let m = c.module();
    let mut out = MutationSweep {
        total: 0,
        rejected: 0,
        first_accepted: None,
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for p in 0..m.rank() {
                    let mutated = c.with_added([i, j, k], &m.basis(p))?;
                    out.total += 1;
                    if matches!(mutated.verify()?, CocycleCheck::Violated { .. }) {
                        out.rejected += 1;
                    } else if out.first_accepted.is_none() {
                        let els = q.elements();
                        out.first_accepted = Some(([els[i].clone(), els[j].clone(), els[k].clone()], p));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn describe_check(q: &Group, check: &CocycleCheck) -> String {
    match check {
        CocycleCheck::Valid => "valid".into(),
        CocycleCheck::Violated { quadruple, defect } => format!(
            "violated at ({}) with defect {defect}",
            quadruple.iter().map(|g| q.format(g)).collect::<Vec<_>>().join(",")
        ),
    }
}

fn matrices<'a>(s: &'a Scenario, names: &[String]) -> Result<Vec<&'a InvertiblePair>, Failure> {
    names
        .iter()
        .map(|n| {
            s.matrices
                .get(n)
                .ok_or_else(|| Failure::invalid(format!("undeclared matrix \"{n}\"")))
        })
        .collect()
}

/// Cocycle checks, and with three matrices the value of chi, naturality
/// under every declared map out of the coefficient module, and the
/// retraction check.
pub fn chi(s: &Scenario, cocycle: Option<&str>, names: Option<Vec<String>>, mutations: bool) -> Outcome {
    let paper = s.paper.as_ref();
    let cname = cocycle
        .map(str::to_string)
        .or_else(|| paper.and_then(|p| p.cocycle.clone()))
        .or_else(|| s.cocycles.iter().next().map(|(n, _)| n.to_string()))
        .ok_or_else(|| Failure::rejected("the scenario declares no cocycle"))?;
    let c = s
        .cocycles
        .get(&cname)
        .ok_or_else(|| Failure::invalid(format!("undeclared cocycle \"{cname}\"")))?;
    let q = c.quotient().target();
    let mut r = Report::new();
    r.line("COCYCLE", &cname);
    r.line("QUOTIENT", describe_group(q));
    r.line("MODULE", c.module().name());
    let check = c.verify()?;
    r.line("VERIFY", describe_check(q, &check));
    if mutations && !c.is_zero_table() {
        let sweep = mutation_sweep(c)?;
        r.line("MUTATIONS_REJECTED", format!("{}/{}", sweep.rejected, sweep.total));
    }
    let names = names.or_else(|| paper.and_then(|p| p.chi.clone().map(Vec::from)));
    let Some(names) = names else {
        return Ok(r);
    };
    if names.len() != 3 {
        return Err(Failure::invalid("chi needs exactly three matrices A,B,C"));
    }
    if !check.is_valid() {
        return Err(Failure::rejected(format!("cocycle {cname} fails the cocycle identity")));
    }
    let ms = matrices(s, &names)?;
    let abc = ms[0].compose(ms[1])?.compose(ms[2])?;
    let (a, b, cm, d) = (ms[0].matrix(), ms[1].matrix(), ms[2].matrix(), abc.inverse());
    r.line("MATRICES", names.join(","));
    r.line("CHI", chi_eval(c, a, b, cm, d)?);
    for (name, phi) in s.maps.iter() {
        if **phi.source() != **c.module() {
            continue;
        }
        if !phi.is_equivariant()? {
            r.line(&format!("NATURAL_{name}"), "skipped (map is not equivariant)");
            continue;
        }
        match chi_naturality_check(phi, c, a, b, cm, d) {
            Ok(ok) => r.line(&format!("NATURAL_{name}"), yes_no(ok)),
            Err(obkit_core::Error::Rejected(msg)) => r.line(&format!("NATURAL_{name}"), format!("skipped ({msg})")),
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(p) = paper {
        let rmap = map(s, &p.retraction)?;
        if **rmap.source() == **c.module() {
            r.line("RETRACTION", retraction_kills_chi(rmap, c, a, b, cm, d)?);
        }
    }
    Ok(r)
}

fn lens<'a>(s: &'a Scenario, name: Option<&str>) -> Result<(String, &'a LensClass), Failure> {
    let name = name
        .map(str::to_string)
        .or_else(|| s.paper.as_ref().map(|p| p.lens.clone()))
        .or_else(|| s.lenses.iter().next().map(|(n, _)| n.to_string()))
        .ok_or_else(|| Failure::rejected("the scenario declares no lens"))?;
    let l = s
        .lenses
        .get(&name)
        .ok_or_else(|| Failure::invalid(format!("undeclared lens \"{name}\"")))?;
    Ok((name, l))
}

fn lens_lines(r: &mut Report, prefix: &str, l: &LensClass) {
    r.line(&format!("{prefix}INDEX"), format!("k={} n={}", l.k(), l.n()));
    r.line(&format!("{prefix}LAMBDA0"), l.main());
    r.line(&format!("{prefix}FRAMING"), l.framing());
    let st = stable_obstruction(l);
    r.line(&format!("{prefix}STABLE"), &st.main);
    r.line(&format!("{prefix}STABLE_FRAMING"), &st.framing);
}

pub fn obstruct(s: &Scenario, name: Option<&str>) -> Outcome {
    let (name, l) = lens(s, name)?;
    let mut r = Report::new();
    r.line("LENS", name);
    r.line("MODULE", l.main().module().name());
    lens_lines(&mut r, "", l);
    let e = involution(l)?;
    lens_lines(&mut r, "EPS_", &e);
    r.line("EPS_EXTRAPOLATED", yes_no(e.is_extrapolated()));
    r.line("EPS_EPS_IDENTITY", yes_no(involution(&e)? == *l));
    let pos = suspend(l, Suspension::Positive);
    let neg = suspend(l, Suspension::Negative);
    r.line("SUSPEND_POS_INDEX", format!("k={} n={}", pos.k(), pos.n()));
    r.line("SUSPEND_POS_STABLE", &stable_obstruction(&pos).main);
    r.line("SUSPEND_NEG_INDEX", format!("k={} n={}", neg.k(), neg.n()));
    r.line("SUSPEND_NEG_STABLE", &stable_obstruction(&neg).main);
    Ok(r)
}

/// `1..N`, `none`, or an explicit list.
fn power_range(flags: &[(u32, bool)]) -> String {
    let hits: Vec<u32> = flags.iter().filter(|(_, b)| *b).map(|(n, _)| *n).collect();
    match hits.as_slice() {
        [] => "none".into(),
        _ if hits.len() == flags.len() => format!("1..{}", flags.len()),
        _ => hits.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
    }
}

/// The whole pipeline on the scenario's `paper` section: the lens, its
/// upside-down image, stabilization, the doubled class, the retraction
/// invariant, all powers, and the circle conclusion.
pub fn report_paper(s: &Scenario) -> Outcome {
    let p = s
        .paper
        .as_ref()
        .ok_or_else(|| Failure::rejected("the scenario has no \"paper\" section"))?;
    if !s.asserts(Assertion::KernelOfFirstInvariant) {
        return Err(Failure::rejected(
            "the retraction invariant is only defined on the kernel of the first obstruction; \
             the scenario must assert kernel-of-first-invariant",
        ));
    }
    let g = &s.group;
    let l = s.lenses.get(&p.lens).expect("resolved at load");
    let rmap = s.maps.get(&p.retraction).expect("resolved at load");
    let sigma = l
        .main()
        .terms()
        .first()
        .map(|(h, _)| h.clone())
        .ok_or_else(|| Failure::rejected("the lens has zero main part"))?;
    let alpha = l.main().terms()[0].1.clone();

    let mut r = Report::new();
    r.line("SCENARIO", &s.name);
    r.line("GROUP", describe_group(g));
    r.line("PI2_MODEL", l.main().module().name());
    r.line("SIGMA", g.format(&sigma));
    r.line("SIGMA_INVERSE", g.format(&g.inverse(&sigma)));
    r.line(
        "SIGMA_ORDER_2",
        yes_no(!sigma.is_identity() && g.mul(&sigma, &sigma).is_identity()),
    );
    r.line("ALPHA", &alpha);
    r.line("R_ALPHA", rmap.apply(&alpha)?);
    r.line("LAMBDA0", format!("{} (k={}, n={})", l.main(), l.k(), l.n()));
    r.line("STABLE", &stable_obstruction(l).main);
    let e = involution(l)?;
    r.line("EPS", format!("{} (k={}, n={})", e.main(), e.k(), e.n()));
    r.line("STABLE_EPS", &stable_obstruction(&e).main);
    r.line("EXTRAPOLATED", yes_no(e.is_extrapolated()));
    let pos = stable_obstruction(&suspend(l, Suspension::Positive));
    let neg = stable_obstruction(&suspend(l, Suspension::Negative));
    let base = stable_obstruction(l);
    r.line("SUSPEND_POS_PRESERVES", yes_no(pos == base));
    r.line("SUSPEND_NEG_NEGATES", yes_no(neg == base.neg()));

    let single = PseudoisotopyClass::single(l.clone());
    let double = clam_double(l)?;
    r.line("STABLE_DOUBLE", &stable_sum(&double)?.main);
    r.line("RHO_G", retraction_invariant(&single, rmap)?);
    r.line(
        "RHO_EPS",
        retraction_invariant(&PseudoisotopyClass::single(e.clone()), rmap)?,
    );
    let rho = retraction_invariant(&double, rmap)?;
    r.line("RHO_DOUBLE", &rho);
    let powers = power_report(&rho, p.powers);
    let explicit: Vec<(u32, bool)> = powers.iter().map(|e| (e.n, e.explicit_nontrivial)).collect();
    let shortcut: Vec<(u32, bool)> = powers.iter().map(|e| (e.n, e.shortcut_nontrivial)).collect();
    r.line("POWERS_NONTRIVIAL", power_range(&explicit));
    r.line("POWERS_SHORTCUT", power_range(&shortcut));
    if let Some(last) = powers.last() {
        r.line(&format!("RHO_TIMES_{}", last.n), &last.value);
    }

    if let Some(cname) = &p.cocycle {
        let c = s.cocycles.get(cname).expect("resolved at load");
        let check = c.verify()?;
        r.line("COCYCLE", describe_check(c.quotient().target(), &check));
        if let (Some(names), true) = (&p.chi, check.is_valid()) {
            let ms = matrices(s, names)?;
            let abc = ms[0].compose(ms[1])?.compose(ms[2])?;
            let (a, b, cm, d) = (ms[0].matrix(), ms[1].matrix(), ms[2].matrix(), abc.inverse());
            r.line("CHI", chi_eval(c, a, b, cm, d)?);
            r.line("CHI_RETRACTED", retraction_kills_chi(rmap, c, a, b, cm, d)?);
        }
    }

    let assumed: Vec<&str> = s.assertions.iter().map(|a| a.keyword()).collect();
    r.line("ASSUMED", assumed.join(", "));
    r.line("PSEUDOISOTOPIC_TO_IDENTITY", "yes (after positive suspension)");
    let circle = circle_conclusion(&double, rmap)?;
    r.line("CIRCLE", &circle);
    if let CircleConclusion::Nontrivial { .. } = circle {
        r.line("CIRCLE_POWERS", "all nontrivial");
    }
    Ok(r)
}

/// Named finite groups for the oracle.
pub fn oracle_group(token: &str) -> Option<Group> {
    let cyclic = |m| Group::new(vec![FactorSpec::cyclic("s", m)]).expect("valid");
    Some(match token {
        "Z2" => cyclic(2),
        "Z3" => cyclic(3),
        "Z4" => cyclic(4),
        "Z6" => cyclic(6),
        "Z2xZ2" => Group::new(vec![FactorSpec::abelian(&[] as &[&str], &[("a", 2), ("b", 2)])]).expect("valid"),
        _ => return None,
    })
}

pub const ORACLE_GROUPS: [&str; 5] = ["Z2", "Z3", "Z4", "Z6", "Z2xZ2"];
pub const ORACLE_COEFFICIENTS: [&str; 3] = ["Ztrivial", "Z2trivial", "Z^2trivial"];

/// Trivial-action coefficient modules for the oracle.
pub fn oracle_coefficients(group: &Group, token: &str) -> Option<Arc<GModule>> {
    let module = match token {
        "Ztrivial" => GModule::integers(group),
        "Z2trivial" => GModule::z2(group),
        "Z^2trivial" => {
            GModule::new(group, GModuleSpec::trivial(group, "Z^2", 2, IntMatrix::zeros(0, 2))).expect("valid module")
        }
        _ => return None,
    };
    Some(Arc::new(module))
}

/// Random terms and a second list equal to them in `Wh1+`: every term
/// `a[h]` is moved to `(k a)[k h k^-1]` and identity terms are sprinkled in.
pub fn equal_pair<R: Rng>(rng: &mut R, m: &GModule) -> Result<(Terms, Terms), Failure> {
    let g = m.group();
    let x = sample::wh_terms(rng, m, 5, 3);
    let mut y = Vec::with_capacity(x.len() + 1);
    for (a, h) in &x {
        let k = sample::element(rng, g, 3);
        y.push((m.act(&k, a)?, g.conjugate(&k, h)));
    }
    if rng.gen_bool(0.5) {
        y.push((sample::module_element(rng, m, 3), g.identity()));
    }
    Ok((x, y))
}

pub fn oracle_wh(g: &Group, m: &Arc<GModule>, label: &str, pairs: usize, seed: Option<u64>) -> Outcome {
    let oracle = WhOracle::new(m)?;
    let elements = g.enumerate_elements()?;
    let classes: BTreeSet<GroupElement> = elements.iter().map(|x| g.conjugacy_canonical(x)).collect();
    let mut r = Report::new();
    r.line("GROUP", describe_group(g));
    r.line("COEFFICIENTS", label);
    r.line("GROUP_ORDER", oracle.group_order());
    r.line("CONJUGACY_CLASSES", classes.len());
    let factors = oracle.invariant_factors();
    let shown = if factors.is_empty() {
        "none".to_string()
    } else {
        factors.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")
    };
    r.line("INVARIANT_FACTORS", shown);
    r.line("FREE_RANK", oracle.free_rank());
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut agree = 0;
        let mut equal = 0;
        for i in 0..pairs {
            let (x, y) = if i % 2 == 0 {
                equal_pair(&mut rng, m)?
            } else {
                (sample::wh_terms(&mut rng, m, 5, 3), sample::wh_terms(&mut rng, m, 5, 3))
            };
            let by_form = WhElement::from_terms(m, x.clone())? == WhElement::from_terms(m, y.clone())?;
            let by_oracle = oracle.coordinates_of_terms(&x)? == oracle.coordinates_of_terms(&y)?;
            agree += usize::from(by_form == by_oracle);
            equal += usize::from(by_oracle);
        }
        r.line("SEED", seed);
        r.line("PAIRS", pairs);
        r.line("EQUAL_PAIRS", equal);
        r.line("AGREEMENT", format!("{agree}/{pairs}"));
    }
    Ok(r)
}
