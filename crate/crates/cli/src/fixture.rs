//! JSON fixture documents.
//!
//! A document has four top-level fields: `kind`, `name`, `arity_bound` and
//! `payload`. The payload layout depends on the kind:
//!
//! ```text
//! multicat      a multicategory spec: {"builder": ..} | {"file": ..} | {"table": ..}
//! multifunctor  {source, target, objects, cells}
//! pseudo        {source, target, objects, cells, isos}
//! nattrans      {source, target, components}, source/target are functor specs
//! pseudonat     {source, target, components}, source/target are pseudo specs
//! ```
//!
//! File references are resolved relative to the referring document.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use multicoh::construct::{
    assoc_operad, barratt_eccles, delooping_operad, end_of_monoid, product_multicat, terminal_operad, weight_operad,
    FinCommMonoid,
};
use multicoh::fincat::{Category, FinCat};
use multicoh::functors::{tabulate, MultiNatTrans, TableMap};
use multicoh::multicat::TableMulticategory;
use multicoh::pseudo::{tabulate_iso, PseudoSymMultiNatTrans, TableIso};
use multicoh::{Id, Level, MultiRef, Multicategory, Perm, Signature};
use multicoh::functors::MultiFunctor;
use multicoh::pseudo::PseudoSymMultiFunctor;
use serde::de::{DeserializeOwned, IgnoredAny};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Multicat,
    Multifunctor,
    Pseudo,
    Nattrans,
    Pseudonat,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Multicat => "multicat",
            Kind::Multifunctor => "multifunctor",
            Kind::Pseudo => "pseudo",
            Kind::Nattrans => "nattrans",
            Kind::Pseudonat => "pseudonat",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name", deny_unknown_fields)]
pub enum Builder {
    Terminal,
    Assoc,
    BarrattEccles,
    EndOfMonoid { order: usize },
    Weight { order: usize },
    Delooping { order: usize },
    Product { left: Box<MulticatSpec>, right: Box<MulticatSpec> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MulticatSpec {
    Builder(Builder),
    File(PathBuf),
    Table(MulticatTable),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Morphism {
    pub id: Id,
    pub src: Id,
    pub dst: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityEntry {
    pub object: Id,
    pub morphism: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeEntry {
    pub g: Id,
    pub f: Id,
    pub result: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomTable {
    pub signature: Signature,
    pub objects: Vec<Id>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<IdentityEntry>,
    pub composites: Vec<CompositeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitEntry {
    pub object: Id,
    pub unit: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub signature: Signature,
    pub sigma: Vec<usize>,
    pub level: Level,
    pub cell: Id,
    pub result: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaEntry {
    pub outer: Signature,
    pub inners: Vec<Signature>,
    pub level: Level,
    pub args: Vec<Id>,
    pub result: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MulticatTable {
    pub name: String,
    pub objects: Vec<Id>,
    pub homs: Vec<HomTable>,
    pub units: Vec<UnitEntry>,
    pub actions: Vec<ActionEntry>,
    pub gammas: Vec<GammaEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectEntry {
    pub object: Id,
    pub image: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub signature: Signature,
    pub level: Level,
    pub cell: Id,
    pub image: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoEntry {
    pub signature: Signature,
    pub sigma: Vec<usize>,
    pub cell: Id,
    pub component: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorPayload {
    pub source: MulticatSpec,
    pub target: MulticatSpec,
    pub objects: Vec<ObjectEntry>,
    pub cells: Vec<CellEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudoPayload {
    pub source: MulticatSpec,
    pub target: MulticatSpec,
    pub objects: Vec<ObjectEntry>,
    pub cells: Vec<CellEntry>,
    pub isos: Vec<IsoEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Ref<T> {
    File(PathBuf),
    Table(T),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentEntry {
    pub object: Id,
    pub component: Id,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatPayload<F> {
    pub source: Ref<F>,
    pub target: Ref<F>,
    pub components: Vec<ComponentEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Multicat(MulticatSpec),
    Multifunctor(FunctorPayload),
    Pseudo(PseudoPayload),
    Nattrans(NatPayload<FunctorPayload>),
    Pseudonat(NatPayload<PseudoPayload>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureDocument {
    pub kind: Kind,
    pub name: String,
    pub arity_bound: usize,
    pub payload: Payload,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Typed<P> {
    kind: Kind,
    name: String,
    arity_bound: usize,
    payload: P,
}

/// One problem found while reading a fixture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum Problem {
    Schema { field: String, line: Option<usize>, column: Option<usize>, message: String },
    DanglingReference { field: String, message: String },
    ArityMismatch { field: String, message: String },
    Io { message: String },
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Schema { field, line: Some(l), column: Some(c), message } => {
                write!(f, "schema error at line {l}, column {c}, field `{field}`: {message}")
            }
            Problem::Schema { field, message, .. } => write!(f, "schema error at field `{field}`: {message}"),
            Problem::DanglingReference { field, message } => write!(f, "dangling reference at `{field}`: {message}"),
            Problem::ArityMismatch { field, message } => write!(f, "arity mismatch at `{field}`: {message}"),
            Problem::Io { message } => f.write_str(message),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub struct FixtureError {
    pub file: PathBuf,
    pub problems: Vec<Problem>,
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} problem(s)", self.file.display(), self.problems.len())?;
        for p in &self.problems {
            write!(f, "\n  {p}")?;
        }
        Ok(())
    }
}

fn typed<P: DeserializeOwned>(text: &str) -> Result<Typed<P>, Problem> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        Problem::Schema { field, line: Some(inner.line()), column: Some(inner.column()), message: inner.to_string() }
    })
}

/// Parses the text of a document without resolving references.
pub fn parse_str(text: &str) -> Result<FixtureDocument, Problem> {
    let kind = typed::<IgnoredAny>(text)?.kind;
    fn doc<P: DeserializeOwned>(text: &str, kind: Kind, wrap: fn(P) -> Payload) -> Result<FixtureDocument, Problem> {
        let t: Typed<P> = typed(text)?;
        Ok(FixtureDocument { kind, name: t.name, arity_bound: t.arity_bound, payload: wrap(t.payload) })
    }
    match kind {
        Kind::Multicat => doc(text, kind, Payload::Multicat),
        Kind::Multifunctor => doc(text, kind, Payload::Multifunctor),
        Kind::Pseudo => doc(text, kind, Payload::Pseudo),
        Kind::Nattrans => doc(text, kind, Payload::Nattrans),
        Kind::Pseudonat => doc(text, kind, Payload::Pseudonat),
    }
}

pub fn to_json(doc: &FixtureDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<FixtureDocument, FixtureError> {
    let err = |p| FixtureError { file: path.to_path_buf(), problems: vec![p] };
    let text = std::fs::read_to_string(path).map_err(|e| err(Problem::Io { message: format!("cannot read: {e}") }))?;
    parse_str(&text).map_err(err)
}

/// A resolved, validated fixture.
#[derive(Clone)]
pub enum Value {
    Multicat(MultiRef),
    Multifunctor(MultiFunctor),
    Pseudo(PseudoSymMultiFunctor),
    Nattrans(MultiNatTrans),
    Pseudonat(PseudoSymMultiNatTrans),
}

pub struct Fixture {
    pub doc: FixtureDocument,
    pub value: Value,
}

/// Reads, resolves and validates a document.
pub fn load_fixture(path: &Path) -> Result<Fixture, FixtureError> {
    load_at(path, &mut Vec::new())
}

pub fn parse_fixture(path: &Path) -> Result<FixtureDocument, FixtureError> {
    load_fixture(path).map(|f| f.doc)
}

fn load_at(path: &Path, stack: &mut Vec<PathBuf>) -> Result<Fixture, FixtureError> {
    let canonical = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
    if stack.contains(&canonical) {
        return Err(FixtureError {
            file: path.to_path_buf(),
            problems: vec![Problem::DanglingReference { field: "file".into(), message: "reference cycle".into() }],
        });
    }
    let doc = read(path)?;
    stack.push(canonical);
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut r = Resolver { base, bound: doc.arity_bound, problems: Vec::new(), stack };
    let value = r.document(&doc);
    let problems = r.problems;
    stack.pop();
    match value {
        Some(value) if problems.is_empty() => Ok(Fixture { doc, value }),
        _ => Err(FixtureError { file: path.to_path_buf(), problems }),
    }
}

/// Validates a document given in memory; file references resolve against `base`.
pub fn resolve(doc: &FixtureDocument, base: &Path) -> Result<Value, FixtureError> {
    let mut stack = Vec::new();
    let mut r = Resolver { base: base.to_path_buf(), bound: doc.arity_bound, problems: Vec::new(), stack: &mut stack };
    match r.document(doc) {
        Some(v) if r.problems.is_empty() => Ok(v),
        _ => Err(FixtureError { file: base.join(&doc.name), problems: r.problems }),
    }
}

struct Resolver<'a> {
    base: PathBuf,
    bound: usize,
    problems: Vec<Problem>,
    stack: &'a mut Vec<PathBuf>,
}

impl Resolver<'_> {
    fn dangling(&mut self, field: String, message: String) {
        self.problems.push(Problem::DanglingReference { field, message });
    }

    fn schema(&mut self, field: String, message: String) {
        self.problems.push(Problem::Schema { field, line: None, column: None, message });
    }

    fn document(&mut self, doc: &FixtureDocument) -> Option<Value> {
        match &doc.payload {
            Payload::Multicat(s) => self.multicat(s, "payload").map(Value::Multicat),
            Payload::Multifunctor(p) => self.functor(p, &doc.name, "payload").map(Value::Multifunctor),
            Payload::Pseudo(p) => self.pseudo(p, &doc.name, "payload").map(Value::Pseudo),
            Payload::Nattrans(p) => {
                let source = self.functor_ref(&p.source, &format!("{}.source", doc.name), "payload.source");
                let target = self.functor_ref(&p.target, &format!("{}.target", doc.name), "payload.target");
                let (source, target) = (source?, target?);
                let components = self.components(&p.components, &source, &target)?;
                Some(Value::Nattrans(MultiNatTrans { name: doc.name.clone(), source, target, components }))
            }
            Payload::Pseudonat(p) => {
                let source = self.pseudo_ref(&p.source, &format!("{}.source", doc.name), "payload.source");
                let target = self.pseudo_ref(&p.target, &format!("{}.target", doc.name), "payload.target");
                let (source, target) = (source?, target?);
                let components = self.components(&p.components, &source.underlying, &target.underlying)?;
                Some(Value::Pseudonat(PseudoSymMultiNatTrans { name: doc.name.clone(), source, target, components }))
            }
        }
    }

    fn file(&mut self, file: &Path, field: &str, kind: Kind) -> Option<Value> {
        let path = self.base.join(file);
        if !path.exists() {
            self.dangling(field.into(), format!("no such file {}", path.display()));
            return None;
        }
        match load_at(&path, self.stack) {
            Ok(f) if f.doc.kind != kind => {
                self.schema(field.into(), format!("{} is a {} document, expected {kind}", path.display(), f.doc.kind));
                None
            }
            Ok(f) if f.doc.arity_bound != self.bound => {
                self.problems.push(Problem::ArityMismatch {
                    field: field.into(),
                    message: format!("{} has arity bound {}, expected {}", path.display(), f.doc.arity_bound, self.bound),
                });
                None
            }
            Ok(f) => Some(f.value),
            Err(e) => {
                for p in e.problems {
                    let message = format!("in {}: {p}", e.file.display());
                    self.problems.push(match p {
                        Problem::ArityMismatch { .. } => Problem::ArityMismatch { field: field.into(), message },
                        Problem::Schema { .. } | Problem::Io { .. } => {
                            Problem::Schema { field: field.into(), line: None, column: None, message }
                        }
                        Problem::DanglingReference { .. } => Problem::DanglingReference { field: field.into(), message },
                    });
                }
                None
            }
        }
    }

    fn multicat(&mut self, spec: &MulticatSpec, field: &str) -> Option<MultiRef> {
        let n = self.bound;
        match spec {
            MulticatSpec::Builder(b) => {
                let field = format!("{field}.builder");
                let m = match b {
                    Builder::Terminal => terminal_operad(n),
                    Builder::Assoc => assoc_operad(n),
                    Builder::BarrattEccles => barratt_eccles(n),
                    Builder::EndOfMonoid { order } | Builder::Weight { order } | Builder::Delooping { order }
                        if *order == 0 =>
                    {
                        self.schema(format!("{field}.order"), "monoid order must be positive".into());
                        return None;
                    }
                    Builder::EndOfMonoid { order } => end_of_monoid(FinCommMonoid::cyclic(*order), n).expect("Z/k is commutative"),
                    Builder::Weight { order } => weight_operad(FinCommMonoid::cyclic(*order), n),
                    Builder::Delooping { order } => delooping_operad(FinCommMonoid::cyclic(*order), n),
                    Builder::Product { left, right } => {
                        let l = self.multicat(left, &format!("{field}.left"));
                        let r = self.multicat(right, &format!("{field}.right"));
                        match product_multicat(l?, r?) {
                            Ok(m) => m,
                            Err(e) => {
                                self.problems.push(Problem::ArityMismatch { field, message: e.to_string() });
                                return None;
                            }
                        }
                    }
                };
                Some(m)
            }
            MulticatSpec::File(f) => match self.file(f, &format!("{field}.file"), Kind::Multicat)? {
                Value::Multicat(m) => Some(m),
                _ => None,
            },
            MulticatSpec::Table(t) => self.table(t, &format!("{field}.table")).map(|t| Arc::new(t) as MultiRef),
        }
    }

    fn sig_ok(&mut self, m: &dyn Multicategory, sig: &Signature, field: &str) -> bool {
        if sig.arity() > self.bound {
            self.problems.push(Problem::ArityMismatch {
                field: field.into(),
                message: format!("{sig} has arity {} above the bound {}", sig.arity(), self.bound),
            });
            return false;
        }
        for a in sig.inputs.iter().chain(std::iter::once(&sig.output)) {
            if !m.objects().contains(a) {
                self.dangling(field.into(), format!("object {a} is not declared"));
                return false;
            }
        }
        true
    }

    fn perm(&mut self, images: &[usize], degree: usize, field: &str) -> Option<Perm> {
        match Perm::from_images(images) {
            Ok(p) if p.degree() == degree => Some(p),
            Ok(_) => {
                self.schema(field.into(), format!("{images:?} has degree {}, expected {degree}", images.len()));
                None
            }
            Err(e) => {
                self.schema(field.into(), e.to_string());
                None
            }
        }
    }

    fn member(&mut self, m: &dyn Multicategory, sig: &Signature, level: Level, x: &Id, field: &str) -> bool {
        let ok = m.hom(sig).map(|h| level.contains(h.as_ref(), x)).unwrap_or(false);
        if !ok {
            let what = if level == Level::Obj { "1-cell" } else { "2-cell" };
            self.dangling(field.into(), format!("{x} is not a {what} of {sig}"));
        }
        ok
    }

    fn table(&mut self, t: &MulticatTable, field: &str) -> Option<TableMulticategory> {
        let before = self.problems.len();
        let mut m = TableMulticategory::new(t.name.clone(), self.bound, t.objects.clone());
        let mut seen = std::collections::HashSet::new();
        for a in &t.objects {
            if !seen.insert(a) {
                self.schema(format!("{field}.objects"), format!("object {a} is declared twice"));
            }
        }
        for (i, h) in t.homs.iter().enumerate() {
            let f = format!("{field}.homs[{i}]");
            if !self.sig_ok(&m, &h.signature, &format!("{f}.signature")) {
                continue;
            }
            let cat = FinCat::new(
                h.objects.clone(),
                h.morphisms.iter().map(|x| (x.id.clone(), x.src.clone(), x.dst.clone())).collect(),
                h.identities.iter().map(|x| (x.object.clone(), x.morphism.clone())).collect(),
                h.composites.iter().map(|x| ((x.g.clone(), x.f.clone()), x.result.clone())).collect(),
            );
            match cat {
                Ok(c) => {
                    if m.homs.insert(h.signature.clone(), Arc::new(c)).is_some() {
                        self.schema(format!("{f}.signature"), format!("{} is declared twice", h.signature));
                    }
                }
                Err(e) => self.dangling(f, e.to_string()),
            }
        }
        for (i, u) in t.units.iter().enumerate() {
            let f = format!("{field}.units[{i}]");
            let sig = Signature::unary(u.object.clone());
            if self.sig_ok(&m, &sig, &format!("{f}.object")) && self.member(&m, &sig, Level::Obj, &u.unit, &format!("{f}.unit")) {
                m.set_unit(u.object.clone(), u.unit.clone());
            }
        }
        for (i, a) in t.actions.iter().enumerate() {
            let f = format!("{field}.actions[{i}]");
            if !self.sig_ok(&m, &a.signature, &format!("{f}.signature")) {
                continue;
            }
            let Some(sigma) = self.perm(&a.sigma, a.signature.arity(), &format!("{f}.sigma")) else { continue };
            let acted = a.signature.act(&sigma).expect("degree checked");
            let ok = self.member(&m, &a.signature, a.level, &a.cell, &format!("{f}.cell"))
                & self.member(&m, &acted, a.level, &a.result, &format!("{f}.result"));
            if ok {
                m.set_action(a.signature.clone(), sigma, a.cell.clone(), a.level, a.result.clone());
            }
        }
        for (i, g) in t.gammas.iter().enumerate() {
            let f = format!("{field}.gammas[{i}]");
            let mut ok = self.sig_ok(&m, &g.outer, &format!("{f}.outer"));
            for (k, s) in g.inners.iter().enumerate() {
                ok &= self.sig_ok(&m, s, &format!("{f}.inners[{k}]"));
            }
            if !ok {
                continue;
            }
            let composite = match Signature::compose(&g.outer, &g.inners) {
                Ok(s) => s,
                Err(e) => {
                    self.schema(format!("{f}.inners"), e.to_string());
                    continue;
                }
            };
            if composite.arity() > self.bound {
                self.problems.push(Problem::ArityMismatch {
                    field: f,
                    message: format!("composite {composite} exceeds the bound {}", self.bound),
                });
                continue;
            }
            if g.args.len() != g.inners.len() + 1 {
                self.schema(format!("{f}.args"), format!("expected {} arguments, found {}", g.inners.len() + 1, g.args.len()));
                continue;
            }
            let sigs = std::iter::once(&g.outer).chain(&g.inners);
            for (k, (s, x)) in sigs.zip(&g.args).enumerate() {
                ok &= self.member(&m, s, g.level, x, &format!("{f}.args[{k}]"));
            }
            ok &= self.member(&m, &composite, g.level, &g.result, &format!("{f}.result"));
            if ok {
                m.set_gamma(g.outer.clone(), g.inners.clone(), g.args.clone(), g.level, g.result.clone());
            }
        }
        (self.problems.len() == before).then_some(m)
    }

    fn functor_parts(
        &mut self,
        source: &MulticatSpec,
        target: &MulticatSpec,
        objects: &[ObjectEntry],
        cells: &[CellEntry],
        name: &str,
        field: &str,
    ) -> Option<MultiFunctor> {
        let s = self.multicat(source, &format!("{field}.source"));
        let t = self.multicat(target, &format!("{field}.target"));
        let (s, t) = (s?, t?);
        let before = self.problems.len();
        let mut map = TableMap::default();
        for (i, o) in objects.iter().enumerate() {
            let f = format!("{field}.objects[{i}]");
            if !s.objects().contains(&o.object) {
                self.dangling(format!("{f}.object"), format!("{} is not an object of the source", o.object));
            } else if !t.objects().contains(&o.image) {
                self.dangling(format!("{f}.image"), format!("{} is not an object of the target", o.image));
            } else {
                map.objects.insert(o.object.clone(), o.image.clone());
            }
        }
        for (i, c) in cells.iter().enumerate() {
            let f = format!("{field}.cells[{i}]");
            if !self.sig_ok(s.as_ref(), &c.signature, &format!("{f}.signature"))
                || !self.member(s.as_ref(), &c.signature, c.level, &c.cell, &format!("{f}.cell"))
            {
                continue;
            }
            let image_sig = c.signature.inputs.iter().chain(std::iter::once(&c.signature.output)).map(|a| map.objects.get(a).cloned());
            let Some(mut ids) = image_sig.collect::<Option<Vec<Id>>>() else {
                self.dangling(format!("{f}.signature"), format!("the object map is undefined on {}", c.signature));
                continue;
            };
            let output = ids.pop().expect("signature has an output");
            let image_sig = Signature::new(ids, output);
            if self.member(t.as_ref(), &image_sig, c.level, &c.image, &format!("{f}.image")) {
                map.set(c.signature.clone(), c.cell.clone(), c.level, c.image.clone());
            }
        }
        if self.problems.len() != before {
            return None;
        }
        match MultiFunctor::new(name, s, t, Arc::new(map)) {
            Ok(f) => Some(f),
            Err(e) => {
                self.problems.push(Problem::ArityMismatch { field: field.into(), message: e.to_string() });
                None
            }
        }
    }

    fn functor(&mut self, p: &FunctorPayload, name: &str, field: &str) -> Option<MultiFunctor> {
        self.functor_parts(&p.source, &p.target, &p.objects, &p.cells, name, field)
    }

    fn pseudo(&mut self, p: &PseudoPayload, name: &str, field: &str) -> Option<PseudoSymMultiFunctor> {
        let f = self.functor_parts(&p.source, &p.target, &p.objects, &p.cells, name, field)?;
        let before = self.problems.len();
        let mut iso = TableIso::default();
        for (i, e) in p.isos.iter().enumerate() {
            let fld = format!("{field}.isos[{i}]");
            if !self.sig_ok(f.source.as_ref(), &e.signature, &format!("{fld}.signature")) {
                continue;
            }
            let Some(sigma) = self.perm(&e.sigma, e.signature.arity(), &format!("{fld}.sigma")) else { continue };
            if !self.member(f.source.as_ref(), &e.signature, Level::Obj, &e.cell, &format!("{fld}.cell")) {
                continue;
            }
            let at = f.image_signature(&e.signature).and_then(|s| s.act(&sigma));
            match at {
                Ok(at) if self.member(f.target.as_ref(), &at, Level::Mor, &e.component, &format!("{fld}.component")) => {
                    iso.entries.entry((e.signature.clone(), sigma)).or_default().insert(e.cell.clone(), e.component.clone());
                }
                Ok(_) => {}
                Err(err) => self.dangling(format!("{fld}.signature"), err.to_string()),
            }
        }
        (self.problems.len() == before).then(|| PseudoSymMultiFunctor { underlying: f, iso: Arc::new(iso) })
    }

    fn functor_ref(&mut self, r: &Ref<FunctorPayload>, name: &str, field: &str) -> Option<MultiFunctor> {
        match r {
            Ref::Table(p) => self.functor(p, name, &format!("{field}.table")),
            Ref::File(path) => match self.file(path, &format!("{field}.file"), Kind::Multifunctor)? {
                Value::Multifunctor(f) => Some(f),
                _ => None,
            },
        }
    }

    fn pseudo_ref(&mut self, r: &Ref<PseudoPayload>, name: &str, field: &str) -> Option<PseudoSymMultiFunctor> {
        match r {
            Ref::Table(p) => self.pseudo(p, name, &format!("{field}.table")),
            Ref::File(path) => match self.file(path, &format!("{field}.file"), Kind::Pseudo)? {
                Value::Pseudo(f) => Some(f),
                _ => None,
            },
        }
    }

    fn components(&mut self, entries: &[ComponentEntry], f: &MultiFunctor, g: &MultiFunctor) -> Option<BTreeMap<Id, Id>> {
        let before = self.problems.len();
        let mut out = BTreeMap::new();
        for (i, c) in entries.iter().enumerate() {
            let field = format!("payload.components[{i}]");
            if !f.source.objects().contains(&c.object) {
                self.dangling(format!("{field}.object"), format!("{} is not an object of the source", c.object));
                continue;
            }
            let sig = match (f.object(&c.object), g.object(&c.object)) {
                (Ok(a), Ok(b)) => Signature::new(vec![a], b),
                _ => {
                    self.dangling(format!("{field}.object"), format!("a functor is undefined on {}", c.object));
                    continue;
                }
            };
            if self.member(f.target.as_ref(), &sig, Level::Obj, &c.component, &format!("{field}.component")) {
                out.insert(c.object.clone(), c.component.clone());
            }
        }
        (self.problems.len() == before).then_some(out)
    }
}

/// Exports any multicategory as an explicit table.
pub fn multicat_table(m: &dyn Multicategory) -> multicoh::Result<MulticatTable> {
    let t = TableMulticategory::materialize(m)?;
    let homs = t
        .homs
        .iter()
        .map(|(sig, h)| HomTable {
            signature: sig.clone(),
            objects: h.objects().to_vec(),
            morphisms: h
                .morphisms()
                .iter()
                .map(|x| {
                    let (src, dst) = h.ends(x).cloned().expect("declared morphism");
                    Morphism { id: x.clone(), src, dst }
                })
                .collect(),
            identities: h.identity_table().into_iter().map(|(object, morphism)| IdentityEntry { object, morphism }).collect(),
            composites: h.composite_table().into_iter().map(|((g, f), result)| CompositeEntry { g, f, result }).collect(),
        })
        .collect();
    let units = t.units.iter().map(|(a, u)| UnitEntry { object: a.clone(), unit: u.clone() }).collect();
    let mut actions = Vec::new();
    for ((sig, sigma), tables) in &t.actions {
        for level in [Level::Obj, Level::Mor] {
            for (x, r) in level_entries(tables, level) {
                actions.push(ActionEntry {
                    signature: sig.clone(),
                    sigma: sigma.images(),
                    level,
                    cell: x[0].clone(),
                    result: r.clone(),
                });
            }
        }
    }
    actions.sort_by(|a, b| (&a.signature, &a.sigma, a.level, &a.cell).cmp(&(&b.signature, &b.sigma, b.level, &b.cell)));
    let mut gammas = Vec::new();
    for ((outer, inners), tables) in &t.gammas {
        for level in [Level::Obj, Level::Mor] {
            for (args, r) in level_entries(tables, level) {
                gammas.push(GammaEntry {
                    outer: outer.clone(),
                    inners: inners.clone(),
                    level,
                    args: args.clone(),
                    result: r.clone(),
                });
            }
        }
    }
    gammas.sort_by(|a, b| (&a.outer, &a.inners, a.level, &a.args).cmp(&(&b.outer, &b.inners, b.level, &b.args)));
    Ok(MulticatTable { name: m.key(), objects: m.objects().to_vec(), homs, units, actions, gammas })
}

fn level_entries(t: &multicoh::multicat::LevelTables, level: Level) -> Vec<(&Vec<Id>, &Id)> {
    let map = match level {
        Level::Obj => &t.obj,
        Level::Mor => &t.mor,
    };
    map.iter().collect()
}

fn functor_tables(f: &MultiFunctor) -> multicoh::Result<(Vec<ObjectEntry>, Vec<CellEntry>)> {
    let t = tabulate(f)?;
    let objects = t.objects.into_iter().map(|(object, image)| ObjectEntry { object, image }).collect();
    let mut cells = Vec::new();
    for (sig, (o, m)) in t.cells {
        for (level, table) in [(Level::Obj, o), (Level::Mor, m)] {
            for (cell, image) in table {
                cells.push(CellEntry { signature: sig.clone(), level, cell, image });
            }
        }
    }
    Ok((objects, cells))
}

pub fn functor_payload(f: &MultiFunctor, source: MulticatSpec, target: MulticatSpec) -> multicoh::Result<FunctorPayload> {
    let (objects, cells) = functor_tables(f)?;
    Ok(FunctorPayload { source, target, objects, cells })
}

pub fn pseudo_payload(f: &PseudoSymMultiFunctor, source: MulticatSpec, target: MulticatSpec) -> multicoh::Result<PseudoPayload> {
    let (objects, cells) = functor_tables(&f.underlying)?;
    let mut isos = Vec::new();
    for ((signature, sigma), entries) in tabulate_iso(f)?.entries {
        for (cell, component) in entries {
            isos.push(IsoEntry { signature: signature.clone(), sigma: sigma.images(), cell, component });
        }
    }
    Ok(PseudoPayload { source, target, objects, cells, isos })
}

pub fn components(c: &BTreeMap<Id, Id>) -> Vec<ComponentEntry> {
    c.iter().map(|(object, component)| ComponentEntry { object: object.clone(), component: component.clone() }).collect()
}

/// Rewrites relative file references so that they resolve from `to`
/// instead of `from`.
pub fn rebase(spec: &MulticatSpec, from: &Path) -> MulticatSpec {
    match spec {
        MulticatSpec::File(p) if p.is_relative() => {
            let abs = from.join(p);
            MulticatSpec::File(abs.canonicalize().unwrap_or(abs))
        }
        MulticatSpec::Builder(Builder::Product { left, right }) => MulticatSpec::Builder(Builder::Product {
            left: Box::new(rebase(left, from)),
            right: Box::new(rebase(right, from)),
        }),
        other => other.clone(),
    }
}
