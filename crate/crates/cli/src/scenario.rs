//! Scenario files: a group, coefficient modules, maps, a cocycle, matrices
//! and lens data, resolved and validated in one pass. Loading either yields
//! a complete [`Scenario`] or every diagnostic found.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use obkit_core::chi::{Cocycle, FiniteQuotient};
use obkit_core::ghmodules::{GModule, GModuleSpec, ModuleElement, ModuleMap};
use obkit_core::groupring::{build_invertible_from_text, from_explicit, InvertiblePair, RingMatrix};
use obkit_core::groups::{FactorKind, FactorSpec, Group, GroupElement};
use obkit_core::intlinalg::IntMatrix;
use obkit_core::obstruction::{make_lens, LensClass};
use obkit_core::wh1::WhElement;
use obkit_core::Error;

use crate::diag::{Code, Diagnostic};
use crate::json::{self, Key, Pos, Str, Value};

/// Declaration-ordered name table.
#[derive(Debug, Clone)]
pub struct Named<T> {
    items: Vec<(String, T)>,
}

impl<T> Default for Named<T> {
    fn default() -> Self {
        Named { items: Vec::new() }
    }
}

impl<T> Named<T> {
    pub fn get(&self, name: &str) -> Option<&T> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &T)> {
        self.items.iter().map(|(n, v)| (n.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn insert(&mut self, name: &str, value: T) {
        self.items.push((name.to_string(), value));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assertion {
    /// The class lies in the kernel of the first obstruction, so the stable
    /// retraction invariant is defined on it.
    KernelOfFirstInvariant,
    /// The retraction pushes the cocycle table to zero.
    RetractionKillsCocycle,
}

impl Assertion {
    pub fn keyword(self) -> &'static str {
        match self {
            Assertion::KernelOfFirstInvariant => "kernel-of-first-invariant",
            Assertion::RetractionKillsCocycle => "retraction-kills-cocycle",
        }
    }

    fn from_keyword(s: &str) -> Option<Assertion> {
        [Assertion::KernelOfFirstInvariant, Assertion::RetractionKillsCocycle]
            .into_iter()
            .find(|a| a.keyword() == s)
    }
}

/// What `report-paper` runs on.
#[derive(Debug, Clone)]
pub struct PaperSetup {
    pub lens: String,
    pub retraction: String,
    pub cocycle: Option<String>,
    pub chi: Option<[String; 3]>,
    pub powers: u32,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub group: Group,
    pub modules: Named<Arc<GModule>>,
    pub maps: Named<ModuleMap>,
    pub elements: Named<GroupElement>,
    pub quotients: Named<Arc<FiniteQuotient>>,
    pub cocycles: Named<Cocycle>,
    pub matrices: Named<InvertiblePair>,
    pub lenses: Named<LensClass>,
    pub assertions: Vec<Assertion>,
    pub paper: Option<PaperSetup>,
}

pub const BUILTIN_MODULES: [&str; 2] = ["Z", "Z2"];

impl Scenario {
    /// A bare scenario over `group` with only the built-in modules.
    pub fn over(name: &str, group: Group) -> Scenario {
        let mut modules = Named::default();
        modules.insert("Z", Arc::new(GModule::integers(&group)));
        modules.insert("Z2", Arc::new(GModule::z2(&group)));
        Scenario {
            name: name.to_string(),
            group,
            modules,
            maps: Named::default(),
            elements: Named::default(),
            quotients: Named::default(),
            cocycles: Named::default(),
            matrices: Named::default(),
            lenses: Named::default(),
            assertions: Vec::new(),
            paper: None,
        }
    }

    pub fn asserts(&self, a: Assertion) -> bool {
        self.assertions.contains(&a)
    }

    /// A named group element, or else a word.
    pub fn group_element(&self, text: &str) -> obkit_core::Result<GroupElement> {
        match self.elements.get(text) {
            Some(g) => Ok(g.clone()),
            None => self.group.parse(text),
        }
    }
}

/// `<t> * <u>`, `<t> * Z/6<s>`, `Z^2<a,b>`, ...
pub fn describe_group(group: &Group) -> String {
    group
        .factors()
        .iter()
        .map(|f| match &f.kind {
            FactorKind::Free { .. } => format!("<{}>", f.names.join(",")),
            FactorKind::Abelian { free_rank, torsion } => {
                let mut parts = Vec::new();
                if *free_rank > 0 {
                    parts.push(if *free_rank == 1 {
                        "Z".to_string()
                    } else {
                        format!("Z^{free_rank}")
                    });
                }
                parts.extend(torsion.iter().map(|m| format!("Z/{m}")));
                format!("{}<{}>", parts.join("x"), f.names.join(","))
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

const TOP_KEYS: [&str; 11] = [
    "name",
    "group",
    "modules",
    "maps",
    "elements",
    "quotients",
    "cocycles",
    "matrices",
    "lenses",
    "assertions",
    "paper",
];

/// Parses and validates a scenario; diagnostics come back sorted by position.
pub fn load(text: &str) -> Result<Scenario, Vec<Diagnostic>> {
    let start = Pos { line: 1, col: 1 };
    if text.trim().is_empty() {
        return Err(vec![Diagnostic::new(start, Code::Shape, "no group declared")]);
    }
    let doc = json::parse(text).map_err(|d| vec![d])?;
    let mut b = Builder::default();
    let out = b.scenario(&doc);
    b.diags.sort_by_key(|x| (x.pos, x.code));
    match out {
        Some(s) if b.diags.is_empty() => Ok(s),
        _ => Err(b.diags),
    }
}

#[derive(Default)]
struct Builder {
    diags: Vec<Diagnostic>,
    /// Names whose definition already failed; references to them are not
    /// reported a second time.
    failed: BTreeSet<(&'static str, String)>,
}

impl Builder {
    fn report(&mut self, pos: Pos, code: Code, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(pos, code, msg));
    }

    /// Converts a core error raised while reading `at` (a string value when
    /// the error is positional).
    fn core(&mut self, pos: Pos, text: Option<&Str>, e: Error) {
        match (e, text) {
            (Error::Parse { column, message }, Some(s)) => self.report(s.pos_of(column), Code::Expression, message),
            (Error::Parse { message, .. }, None) => self.report(pos, Code::Expression, message),
            (other, _) => self.report(pos, Code::Validation, other.to_string()),
        }
    }

    fn object<'v>(
        &mut self,
        v: &'v Value,
        what: &str,
        allowed: &[&str],
        required: &[&str],
    ) -> Option<&'v [(Key, Value)]> {
        let Some(fields) = v.as_object() else {
            self.report(
                v.pos,
                Code::Shape,
                format!("{what} must be an object, found {}", v.describe()),
            );
            return None;
        };
        for (k, _) in fields {
            if !allowed.contains(&k.name.as_str()) {
                self.report(
                    k.pos,
                    Code::Shape,
                    format!(
                        "unknown field \"{}\" in {what} (expected one of {})",
                        k.name,
                        allowed.join(", ")
                    ),
                );
            }
        }
        let mut ok = true;
        for r in required {
            if !fields.iter().any(|(k, _)| k.name == *r) {
                self.report(v.pos, Code::Shape, format!("{what} is missing field \"{r}\""));
                ok = false;
            }
        }
        ok.then_some(fields)
    }

    fn entries<'v>(&mut self, v: &'v Value, what: &str) -> &'v [(Key, Value)] {
        match v.as_object() {
            Some(f) => f,
            None => {
                self.report(
                    v.pos,
                    Code::Shape,
                    format!("{what} must be an object, found {}", v.describe()),
                );
                &[]
            }
        }
    }

    fn string<'v>(&mut self, v: &'v Value, what: &str) -> Option<&'v Str> {
        let s = v.as_str();
        if s.is_none() {
            self.report(
                v.pos,
                Code::Shape,
                format!("{what} must be a string, found {}", v.describe()),
            );
        }
        s
    }

    fn array<'v>(&mut self, v: &'v Value, what: &str) -> Option<&'v [Value]> {
        let a = v.as_array();
        if a.is_none() {
            self.report(
                v.pos,
                Code::Shape,
                format!("{what} must be an array, found {}", v.describe()),
            );
        }
        a
    }

    fn int(&mut self, v: &Value, what: &str) -> Option<BigInt> {
        let n = v.as_int().cloned();
        if n.is_none() {
            self.report(
                v.pos,
                Code::Shape,
                format!("{what} must be an integer, found {}", v.describe()),
            );
        }
        n
    }

    fn small(&mut self, v: &Value, what: &str, min: u64) -> Option<u64> {
        let n = self.int(v, what)?;
        match n.to_u64().filter(|m| *m >= min && *m <= 1 << 20) {
            Some(m) => Some(m),
            None => {
                self.report(
                    v.pos,
                    Code::Shape,
                    format!("{what} must be an integer in {min}..={}", 1u64 << 20),
                );
                None
            }
        }
    }

    fn vector(&mut self, v: &Value, what: &str, len: usize) -> Option<Vec<BigInt>> {
        let items = self.array(v, what)?;
        if items.len() != len {
            self.report(
                v.pos,
                Code::Validation,
                format!("{what} has {} entries, expected {len}", items.len()),
            );
            return None;
        }
        items.iter().map(|x| self.int(x, what)).collect()
    }

    fn matrix(&mut self, v: &Value, what: &str, rows: Option<usize>, cols: usize) -> Option<IntMatrix> {
        let items = self.array(v, what)?;
        if let Some(r) = rows {
            if items.len() != r {
                self.report(
                    v.pos,
                    Code::Validation,
                    format!("{what} has {} rows, expected {r}", items.len()),
                );
                return None;
            }
        }
        let data: Option<Vec<Vec<BigInt>>> = items.iter().map(|row| self.vector(row, what, cols)).collect();
        Some(IntMatrix::from_rows(cols, &data?).expect("row widths checked"))
    }

    fn reference<'t, T>(&mut self, table: &'t Named<T>, kind: &'static str, v: &Value) -> Option<&'t T> {
        let s = self.string(v, kind)?;
        match table.get(&s.text) {
            Some(x) => Some(x),
            None => {
                if !self.failed.contains(&(kind, s.text.clone())) {
                    self.report(v.pos, Code::Unresolved, format!("undeclared {kind} \"{}\"", s.text));
                }
                None
            }
        }
    }

    fn scenario(&mut self, doc: &Value) -> Option<Scenario> {
        let top = self.object(doc, "scenario", &TOP_KEYS, &[]);
        let Some(group_v) = doc.get("group") else {
            if top.is_some() {
                self.report(doc.pos, Code::Shape, "no group declared");
            }
            return None;
        };
        top?;
        let name = match doc.get("name") {
            Some(v) => self.string(v, "name")?.text.clone(),
            None => "unnamed".to_string(),
        };
        let group = self.group(group_v)?;
        let mut s = Scenario::over(&name, group);
        let empty = Value {
            kind: json::Kind::Object(Vec::new()),
            pos: doc.pos,
        };
        let section = |key: &str| doc.get(key).unwrap_or(&empty);
        self.modules(&mut s, section("modules"));
        self.elements(&mut s, section("elements"));
        self.maps(&mut s, section("maps"));
        self.quotients(&mut s, section("quotients"));
        self.cocycles(&mut s, section("cocycles"));
        self.matrices(&mut s, section("matrices"));
        self.lenses(&mut s, section("lenses"));
        if let Some(v) = doc.get("assertions") {
            self.assertions(&mut s, v);
        }
        if let Some(v) = doc.get("paper") {
            self.paper(&mut s, v);
        }
        Some(s)
    }

    fn factor(&mut self, v: &Value) -> Option<FactorSpec> {
        let fields = self.object(v, "group factor", &["free", "abelian", "cyclic"], &[])?;
        if fields.len() != 1 {
            self.report(
                v.pos,
                Code::Shape,
                "a group factor has exactly one of \"free\", \"abelian\", \"cyclic\"",
            );
            return None;
        }
        let (k, body) = &fields[0];
        let names = |b: &mut Builder, v: &Value| -> Option<Vec<String>> {
            let items = b.array(v, "generator names")?;
            items
                .iter()
                .map(|x| b.string(x, "generator name").map(|s| s.text.clone()))
                .collect()
        };
        let torsion = |b: &mut Builder, v: &Value| -> Option<Vec<(String, u64)>> {
            let entries = b.entries(v, "torsion generators");
            entries
                .iter()
                .map(|(k, m)| b.small(m, "torsion order", 2).map(|m| (k.name.clone(), m)))
                .collect()
        };
        match k.name.as_str() {
            "free" => Some(FactorSpec::free(&names(self, body)?)),
            "cyclic" => {
                let t = torsion(self, body)?;
                if t.len() != 1 {
                    self.report(body.pos, Code::Shape, "\"cyclic\" takes exactly one generator");
                    return None;
                }
                Some(FactorSpec::cyclic(&t[0].0, t[0].1))
            }
            _ => {
                let f = self.object(body, "abelian factor", &["free", "torsion"], &[])?;
                let free = match f.iter().find(|(k, _)| k.name == "free") {
                    Some((_, v)) => names(self, v)?,
                    None => Vec::new(),
                };
                let tors = match f.iter().find(|(k, _)| k.name == "torsion") {
                    Some((_, v)) => torsion(self, v)?,
                    None => Vec::new(),
                };
                let tors: Vec<(&str, u64)> = tors.iter().map(|(n, m)| (n.as_str(), *m)).collect();
                let free: Vec<&str> = free.iter().map(String::as_str).collect();
                Some(FactorSpec::abelian(&free, &tors))
            }
        }
    }

    fn group_from(&mut self, v: &Value, factors: Vec<FactorSpec>) -> Option<Group> {
        match Group::new(factors) {
            Ok(g) => Some(g),
            Err(e) => {
                self.core(v.pos, None, e);
                None
            }
        }
    }

    fn group(&mut self, v: &Value) -> Option<Group> {
        let items = self.array(v, "group")?;
        if items.is_empty() {
            self.report(v.pos, Code::Shape, "no group declared");
            return None;
        }
        let factors: Option<Vec<FactorSpec>> = items.iter().map(|f| self.factor(f)).collect();
        let factors = factors?;
        self.group_from(v, factors)
    }

    fn declare<T>(&mut self, table: &Named<T>, key: &Key, kind: &str) -> bool {
        if table.get(&key.name).is_some() {
            self.report(
                key.pos,
                Code::Duplicate,
                format!("{kind} \"{}\" is already declared", key.name),
            );
            return false;
        }
        true
    }

    fn modules(&mut self, s: &mut Scenario, v: &Value) {
        for (key, body) in self.entries(v, "modules") {
            if !self.declare(&s.modules, key, "module") {
                continue;
            }
            match self.module(&s.group, &key.name, body) {
                Some(m) => s.modules.insert(&key.name, Arc::new(m)),
                None => {
                    self.failed.insert(("module", key.name.clone()));
                }
            }
        }
    }

    fn module(&mut self, group: &Group, name: &str, v: &Value) -> Option<GModule> {
        let f = self.object(v, "module", &["rank", "relations", "actions", "elements"], &["rank"])?;
        let get = |k: &str| f.iter().find(|(key, _)| key.name == k).map(|(_, v)| v);
        let rank = self.small(get("rank")?, "rank", 1)? as usize;
        let relations = match get("relations") {
            Some(r) => self.matrix(r, "relations", None, rank)?,
            None => IntMatrix::zeros(0, rank),
        };
        let mut actions = vec![IntMatrix::identity(rank); group.generator_count()];
        let mut ok = true;
        if let Some(a) = get("actions") {
            for (gk, m) in self.entries(a, "actions") {
                let Some((fi, gi)) = group.lookup(&gk.name) else {
                    self.report(
                        gk.pos,
                        Code::Unresolved,
                        format!("undeclared generator \"{}\"", gk.name),
                    );
                    ok = false;
                    continue;
                };
                match self.matrix(m, "action matrix", Some(rank), rank) {
                    Some(m) => actions[group.flat_index(fi, gi)] = m,
                    None => ok = false,
                }
            }
        }
        if !ok {
            return None;
        }
        let spec = GModuleSpec {
            name: name.to_string(),
            rank,
            relations,
            actions,
        };
        let mut module = match GModule::new(group, spec) {
            Ok(m) => m,
            Err(e) => {
                self.core(v.pos, None, e);
                return None;
            }
        };
        if let Some(els) = get("elements") {
            for (ek, coords) in self.entries(els, "module elements") {
                if module.named(&ek.name).is_some() {
                    self.report(
                        ek.pos,
                        Code::Duplicate,
                        format!("element \"{}\" is already declared", ek.name),
                    );
                    continue;
                }
                let c = self.vector(coords, "module element", rank)?;
                module = module.with_element(&ek.name, &c).expect("rank checked");
            }
        }
        Some(module)
    }

    fn elements(&mut self, s: &mut Scenario, v: &Value) {
        for (key, body) in self.entries(v, "elements") {
            if !self.declare(&s.elements, key, "element") {
                continue;
            }
            let Some(text) = self.string(body, "group element") else {
                continue;
            };
            match s.group.parse(&text.text) {
                Ok(g) => s.elements.insert(&key.name, g),
                Err(e) => {
                    self.core(body.pos, Some(text), e);
                    self.failed.insert(("element", key.name.clone()));
                }
            }
        }
    }

    fn maps(&mut self, s: &mut Scenario, v: &Value) {
        for (key, body) in self.entries(v, "maps") {
            if !self.declare(&s.maps, key, "map") {
                continue;
            }
            match self.map(s, &key.name, body) {
                Some(m) => s.maps.insert(&key.name, m),
                None => {
                    self.failed.insert(("map", key.name.clone()));
                }
            }
        }
    }

    fn map(&mut self, s: &Scenario, name: &str, v: &Value) -> Option<ModuleMap> {
        let f = self.object(
            v,
            "map",
            &["source", "target", "matrix"],
            &["source", "target", "matrix"],
        )?;
        let get = |k: &str| &f.iter().find(|(key, _)| key.name == k).expect("required").1;
        let source = self.reference(&s.modules, "module", get("source"));
        let target = self.reference(&s.modules, "module", get("target"));
        let (source, target) = (source?.clone(), target?.clone());
        let m = self.matrix(get("matrix"), "map matrix", Some(target.rank()), source.rank())?;
        match ModuleMap::new(name, source, target, m) {
            Ok(map) => Some(map),
            Err(e) => {
                self.core(v.pos, None, e);
                None
            }
        }
    }

    fn quotients(&mut self, s: &mut Scenario, v: &Value) {
        for (key, body) in self.entries(v, "quotients") {
            if !self.declare(&s.quotients, key, "quotient") {
                continue;
            }
            match self.quotient(s, body) {
                Some(q) => s.quotients.insert(&key.name, Arc::new(q)),
                None => {
                    self.failed.insert(("quotient", key.name.clone()));
                }
            }
        }
    }

    fn quotient(&mut self, s: &Scenario, v: &Value) -> Option<FiniteQuotient> {
        let f = self.object(v, "quotient", &["target", "images"], &["target", "images"])?;
        let get = |k: &str| &f.iter().find(|(key, _)| key.name == k).expect("required").1;
        let target_v = get("target");
        let factor = self.factor(target_v)?;
        let target = self.group_from(target_v, vec![factor])?;
        let images_v = get("images");
        let given = self.entries(images_v, "images");
        let mut images: Vec<Option<GroupElement>> = vec![None; s.group.generator_count()];
        let mut ok = true;
        for (gk, word) in given {
            let Some((fi, gi)) = s.group.lookup(&gk.name) else {
                self.report(
                    gk.pos,
                    Code::Unresolved,
                    format!("undeclared generator \"{}\"", gk.name),
                );
                ok = false;
                continue;
            };
            let Some(text) = self.string(word, "image") else {
                ok = false;
                continue;
            };
            match target.parse(&text.text) {
                Ok(q) => images[s.group.flat_index(fi, gi)] = Some(q),
                Err(e) => {
                    self.core(word.pos, Some(text), e);
                    ok = false;
                }
            }
        }
        if !ok {
            return None;
        }
        let mut out = Vec::with_capacity(images.len());
        for (flat, img) in images.into_iter().enumerate() {
            match img {
                Some(q) => out.push(q),
                None => {
                    self.report(
                        images_v.pos,
                        Code::Shape,
                        format!("no image given for generator \"{}\"", s.group.generator_name(flat)),
                    );
                    return None;
                }
            }
        }
        match FiniteQuotient::new(&s.group, &target, out) {
            Ok(q) => Some(q),
            Err(e) => {
                self.core(v.pos, None, e);
                None
            }
        }
    }

    fn cocycles(&mut self, s: &mut Scenario, v: &Value) {
        for (key, body) in self.entries(v, "cocycles") {
            if !self.declare(&s.cocycles, key, "cocycle") {
                continue;
            }
            match self.cocycle(s, body) {
                Some(c) => s.cocycles.insert(&key.name, c),
                None => {
                    self.failed.insert(("cocycle", key.name.clone()));
                }
            }
        }
    }

    fn cocycle(&mut self, s: &Scenario, v: &Value) -> Option<Cocycle> {
        let f = self.object(
            v,
            "cocycle",
            &["quotient", "module", "entries"],
            &["quotient", "module", "entries"],
        )?;
        let get = |k: &str| &f.iter().find(|(key, _)| key.name == k).expect("required").1;
        let quotient = self.reference(&s.quotients, "quotient", get("quotient")).cloned();
        let module = self.reference(&s.modules, "module", get("module")).cloned();
        let (quotient, module) = (quotient?, module?);
        let q = quotient.target().clone();
        let mut entries = Vec::new();
        let mut ok = true;
        for e in self.array(get("entries"), "cocycle entries")? {
            match self.cocycle_entry(&q, &module, e) {
                Some(x) => entries.push(x),
                None => ok = false,
            }
        }
        if !ok {
            return None;
        }
        match Cocycle::new(quotient, module, entries) {
            Ok(c) => Some(c),
            Err(e) => {
                self.core(v.pos, None, e);
                None
            }
        }
    }

    fn cocycle_entry(&mut self, q: &Group, module: &GModule, v: &Value) -> Option<([GroupElement; 3], ModuleElement)> {
        let items = self.array(v, "cocycle entry")?;
        if items.len() != 4 {
            self.report(v.pos, Code::Shape, "a cocycle entry is [q1, q2, q3, value]");
            return None;
        }
        let mut triple = Vec::with_capacity(3);
        for w in &items[..3] {
            let text = self.string(w, "quotient element")?;
            match q.parse(&text.text) {
                Ok(x) => triple.push(x),
                Err(e) => {
                    self.core(w.pos, Some(text), e);
                    return None;
                }
            }
        }
        let coords = self.vector(&items[3], "cocycle value", module.rank())?;
        let value = module.element(&coords).expect("rank checked");
        let triple: [GroupElement; 3] = triple.try_into().expect("three entries");
        Some((triple, value))
    }

    fn matrices(&mut self, s: &mut Scenario, v: &Value) {
        for (key, body) in self.entries(v, "matrices") {
            if !self.declare(&s.matrices, key, "matrix") {
                continue;
            }
            match self.invertible(&s.group, body) {
                Some(m) => s.matrices.insert(&key.name, m),
                None => {
                    self.failed.insert(("matrix", key.name.clone()));
                }
            }
        }
    }

    fn ring_rows(&mut self, group: &Group, v: &Value) -> Option<RingMatrix> {
        let rows = self.array(v, "matrix rows")?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let items = self.array(row, "matrix row")?;
            if items.len() != n {
                self.report(
                    row.pos,
                    Code::Validation,
                    format!("row has {} entries; the matrix is {n}x{n}", items.len()),
                );
                return None;
            }
            for x in items {
                let text = self.string(x, "ring element")?;
                match obkit_core::groupring::RingElement::parse(group, &text.text) {
                    Ok(r) => entries.push(r),
                    Err(e) => {
                        self.core(x.pos, Some(text), e);
                        return None;
                    }
                }
            }
        }
        match RingMatrix::from_entries(group, n, entries) {
            Ok(m) => Some(m),
            Err(e) => {
                self.core(v.pos, None, e);
                None
            }
        }
    }

    fn invertible(&mut self, group: &Group, v: &Value) -> Option<InvertiblePair> {
        let f = self.object(v, "matrix", &["size", "generators", "rows", "inverse"], &[])?;
        let get = |k: &str| f.iter().find(|(key, _)| key.name == k).map(|(_, v)| v);
        match (get("size"), get("generators"), get("rows"), get("inverse")) {
            (Some(size), Some(gens), None, None) => {
                let n = self.small(size, "size", 1)? as usize;
                let text = self.string(gens, "generators")?;
                match build_invertible_from_text(group, &text.text, n) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        self.core(gens.pos, Some(text), e);
                        None
                    }
                }
            }
            (None, None, Some(rows), Some(inv)) => {
                let m = self.ring_rows(group, rows);
                let i = self.ring_rows(group, inv);
                let (m, i) = (m?, i?);
                match from_explicit(m, i) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        self.core(inv.pos, None, e);
                        None
                    }
                }
            }
            _ => {
                self.report(
                    v.pos,
                    Code::Shape,
                    "a matrix is given either by \"size\" and \"generators\" or by \"rows\" and \"inverse\"",
                );
                None
            }
        }
    }

    fn lenses(&mut self, s: &mut Scenario, v: &Value) {
        for (key, body) in self.entries(v, "lenses") {
            if !self.declare(&s.lenses, key, "lens") {
                continue;
            }
            match self.lens(s, body) {
                Some(l) => s.lenses.insert(&key.name, l),
                None => {
                    self.failed.insert(("lens", key.name.clone()));
                }
            }
        }
    }

    fn lens(&mut self, s: &Scenario, v: &Value) -> Option<LensClass> {
        let f = self.object(
            v,
            "lens",
            &["module", "alpha", "sigma", "k", "n", "framing"],
            &["module", "alpha", "sigma", "k", "n"],
        )?;
        let get = |k: &str| f.iter().find(|(key, _)| key.name == k).map(|(_, v)| v);
        let module = self.reference(&s.modules, "module", get("module")?)?.clone();
        let alpha_v = get("alpha")?;
        let alpha = match alpha_v.as_str() {
            Some(name) => match module.named(&name.text) {
                Some(a) => a.clone(),
                None => {
                    self.report(
                        alpha_v.pos,
                        Code::Unresolved,
                        format!("module {} has no element \"{}\"", module.name(), name.text),
                    );
                    return None;
                }
            },
            None => {
                let c = self.vector(alpha_v, "alpha", module.rank())?;
                module.element(&c).expect("rank checked")
            }
        };
        let sigma_v = get("sigma")?;
        let sigma_text = self.string(sigma_v, "sigma")?;
        let sigma = match s.group_element(&sigma_text.text) {
            Ok(g) => g,
            Err(e) => {
                self.core(sigma_v.pos, Some(sigma_text), e);
                return None;
            }
        };
        let k = self.small(get("k")?, "k", 0)?;
        let n = self.small(get("n")?, "n", 0)?;
        let lens = match make_lens(&module, &alpha, &sigma, k as u32, n as u32) {
            Ok(l) => l,
            Err(e) => {
                self.core(v.pos, None, e);
                return None;
            }
        };
        let Some(fv) = get("framing") else {
            return Some(lens);
        };
        let text = self.string(fv, "framing")?;
        let z2 = s.modules.get("Z2").expect("built in").clone();
        match WhElement::parse(&z2, &text.text).and_then(|x| lens.with_framing(x)) {
            Ok(l) => Some(l),
            Err(e) => {
                self.core(fv.pos, Some(text), e);
                None
            }
        }
    }

    fn assertions(&mut self, s: &mut Scenario, v: &Value) {
        let Some(items) = self.array(v, "assertions") else {
            return;
        };
        for item in items {
            let Some(text) = self.string(item, "assertion") else {
                continue;
            };
            match Assertion::from_keyword(&text.text) {
                Some(a) if s.assertions.contains(&a) => self.report(
                    item.pos,
                    Code::Duplicate,
                    format!("assertion \"{}\" is repeated", text.text),
                ),
                Some(a) => s.assertions.push(a),
                None => self.report(
                    item.pos,
                    Code::Shape,
                    format!(
                        "unknown assertion \"{}\" (known: {}, {})",
                        text.text,
                        Assertion::KernelOfFirstInvariant.keyword(),
                        Assertion::RetractionKillsCocycle.keyword()
                    ),
                ),
            }
        }
    }

    fn paper(&mut self, s: &mut Scenario, v: &Value) {
        let Some(f) = self.object(
            v,
            "paper",
            &["lens", "retraction", "cocycle", "chi", "powers"],
            &["lens", "retraction"],
        ) else {
            return;
        };
        let get = |k: &str| f.iter().find(|(key, _)| key.name == k).map(|(_, v)| v);
        let name_of = |b: &mut Builder, v: &Value| b.string(v, "name").map(|x| x.text.clone());
        let lens_v = get("lens").expect("required");
        let r_v = get("retraction").expect("required");
        let lens = self.reference(&s.lenses, "lens", lens_v).map(|_| ());
        let r = self.reference(&s.maps, "map", r_v).map(|_| ());
        let cocycle = match get("cocycle") {
            Some(c) => {
                self.reference(&s.cocycles, "cocycle", c);
                name_of(self, c)
            }
            None => None,
        };
        let chi = match get("chi") {
            Some(c) => self.chi_names(s, c),
            None => None,
        };
        let powers = match get("powers") {
            Some(p) => self.small(p, "powers", 1).map(|p| p as u32),
            None => Some(64),
        };
        let (Some(()), Some(())) = (lens, r) else {
            return;
        };
        let setup = PaperSetup {
            lens: name_of(self, lens_v).expect("checked"),
            retraction: name_of(self, r_v).expect("checked"),
            cocycle,
            chi,
            powers: powers.unwrap_or(64),
        };
        if s.asserts(Assertion::RetractionKillsCocycle) {
            self.check_retraction_kills(s, &setup, v.pos);
        }
        s.paper = Some(setup);
    }

    fn chi_names(&mut self, s: &Scenario, v: &Value) -> Option<[String; 3]> {
        let items = self.array(v, "chi")?;
        if items.len() != 3 {
            self.report(v.pos, Code::Shape, "\"chi\" names three matrices [A, B, C]");
            return None;
        }
        let mut names = Vec::new();
        for it in items {
            self.reference(&s.matrices, "matrix", it)?;
            names.push(it.as_str().expect("resolved").text.clone());
        }
        let size = s.matrices.get(&names[0]).expect("resolved").matrix().size();
        if names
            .iter()
            .any(|n| s.matrices.get(n).expect("resolved").matrix().size() != size)
        {
            self.report(v.pos, Code::Validation, "the three matrices must have the same size");
            return None;
        }
        Some(names.try_into().expect("three names"))
    }

    fn check_retraction_kills(&mut self, s: &Scenario, setup: &PaperSetup, pos: Pos) {
        let Some(c) = setup.cocycle.as_ref().and_then(|c| s.cocycles.get(c)) else {
            self.report(
                pos,
                Code::Validation,
                "retraction-kills-cocycle is asserted but no cocycle is named",
            );
            return;
        };
        let r = s.maps.get(&setup.retraction).expect("resolved");
        match c.push_forward(r) {
            Ok(pushed) if pushed.is_zero_table() => {}
            Ok(pushed) => {
                let (triple, value) = pushed
                    .entries()
                    .into_iter()
                    .find(|(_, v)| !v.is_zero())
                    .expect("nonzero");
                let q = c.quotient().target();
                self.report(
                    pos,
                    Code::Validation,
                    format!(
                        "retraction-kills-cocycle is asserted but {} sends c({},{},{}) to {value}",
                        r.name(),
                        q.format(&triple[0]),
                        q.format(&triple[1]),
                        q.format(&triple[2]),
                    ),
                );
            }
            Err(e) => self.core(pos, None, e),
        }
    }
}
