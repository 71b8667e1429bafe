//! Symmetric multifunctors and multinatural transformations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::construct::{product_multicat, split_signature, terminal_operad};
use crate::error::{Error, Result};
use crate::fincat::{check_functor, for_each_tuple, CatRef, Category, Functor};
use crate::id::Id;
use crate::multicat::{same_multicat, show_ids, show_sigs, Level, MultiRef, Signature, SignatureIndex};
use crate::perm::Perm;
use crate::report::{AxiomCheck, Failure, Report};

/// What a multifunctor does to objects, 1-cells and 2-cells.
pub trait CellMap: Send + Sync {
    fn object(&self, a: &Id) -> Result<Id>;
    /// Image of a cell of `source.hom(sig)`.
    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id>;
}

#[derive(Clone)]
pub struct MultiFunctor {
    pub name: String,
    pub source: MultiRef,
    pub target: MultiRef,
    pub map: Arc<dyn CellMap>,
}

impl fmt::Debug for MultiFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.source.key(), self.target.key())
    }
}

impl MultiFunctor {
    pub fn new(name: impl Into<String>, source: MultiRef, target: MultiRef, map: Arc<dyn CellMap>) -> Result<MultiFunctor> {
        if source.arity_bound() != target.arity_bound() {
            return Err(Error::ArityBoundMismatch(source.arity_bound(), target.arity_bound()));
        }
        Ok(MultiFunctor { name: name.into(), source, target, map })
    }

    pub fn object(&self, a: &Id) -> Result<Id> {
        self.map.object(a)
    }

    pub fn apply(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        self.map.map(sig, x, level)
    }

    pub fn image_signature(&self, sig: &Signature) -> Result<Signature> {
        let inputs = sig.inputs.iter().map(|a| self.object(a)).collect::<Result<Vec<_>>>()?;
        Ok(Signature::new(inputs, self.object(&sig.output)?))
    }
}

struct IdentityMap;

impl CellMap for IdentityMap {
    fn object(&self, a: &Id) -> Result<Id> {
        Ok(a.clone())
    }

    fn map(&self, _: &Signature, x: &Id, _: Level) -> Result<Id> {
        Ok(x.clone())
    }
}

pub fn identity_multifunctor(m: MultiRef) -> MultiFunctor {
    MultiFunctor { name: format!("id[{}]", m.key()), source: m.clone(), target: m, map: Arc::new(IdentityMap) }
}

struct CompositeMap {
    g: MultiFunctor,
    f: MultiFunctor,
}

impl CellMap for CompositeMap {
    fn object(&self, a: &Id) -> Result<Id> {
        self.g.object(&self.f.object(a)?)
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        self.g.apply(&self.f.image_signature(sig)?, &self.f.apply(sig, x, level)?, level)
    }
}

/// `g` after `f`.
pub fn compose_multifunctor(g: &MultiFunctor, f: &MultiFunctor) -> Result<MultiFunctor> {
    if !same_multicat(&f.target, &g.source) {
        return Err(Error::BoundaryMismatch(format!("{} does not start where {} ends", g.name, f.name)));
    }
    Ok(MultiFunctor {
        name: format!("{}.{}", g.name, f.name),
        source: f.source.clone(),
        target: g.target.clone(),
        map: Arc::new(CompositeMap { g: g.clone(), f: f.clone() }),
    })
}

type ObjFn = Arc<dyn Fn(&Id) -> Result<Id> + Send + Sync>;
type CellFn = Arc<dyn Fn(&Signature, &Id) -> Result<Id> + Send + Sync>;

/// A map into a multicategory with thin homs, given on objects and 1-cells.
/// A 2-cell goes to the unique arrow between the images of its ends.
struct ThinMap {
    source: MultiRef,
    obj: ObjFn,
    cell: CellFn,
}

impl CellMap for ThinMap {
    fn object(&self, a: &Id) -> Result<Id> {
        (self.obj)(a)
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        match level {
            Level::Obj => (self.cell)(sig, x),
            Level::Mor => {
                let h = self.source.hom(sig)?;
                Ok(Id::arrow((self.cell)(sig, &h.source(x)?)?, (self.cell)(sig, &h.target(x)?)?))
            }
        }
    }
}

/// Builds a multifunctor into a target whose hom categories are chaotic or
/// discrete, from its action on objects and 1-cells.
pub fn thin_map(
    name: impl Into<String>,
    source: MultiRef,
    target: MultiRef,
    obj: impl Fn(&Id) -> Result<Id> + Send + Sync + 'static,
    cell: impl Fn(&Signature, &Id) -> Result<Id> + Send + Sync + 'static,
) -> Result<MultiFunctor> {
    let map = ThinMap { source: source.clone(), obj: Arc::new(obj), cell: Arc::new(cell) };
    MultiFunctor::new(name, source, target, Arc::new(map))
}

type LevelFn = Arc<dyn Fn(&Signature, &Id, Level) -> Result<Id> + Send + Sync>;

struct FnMap {
    obj: ObjFn,
    cell: LevelFn,
}

impl CellMap for FnMap {
    fn object(&self, a: &Id) -> Result<Id> {
        (self.obj)(a)
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        (self.cell)(sig, x, level)
    }
}

/// Builds a multifunctor from closures on objects and on cells of both levels.
pub fn from_fn(
    name: impl Into<String>,
    source: MultiRef,
    target: MultiRef,
    obj: impl Fn(&Id) -> Result<Id> + Send + Sync + 'static,
    cell: impl Fn(&Signature, &Id, Level) -> Result<Id> + Send + Sync + 'static,
) -> Result<MultiFunctor> {
    MultiFunctor::new(name, source, target, Arc::new(FnMap { obj: Arc::new(obj), cell: Arc::new(cell) }))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

struct ProjectionMap(Side);

impl ProjectionMap {
    fn pick<'a>(&self, x: &'a Id) -> Result<&'a Id> {
        let (l, r) = x.expect_pair()?;
        Ok(if self.0 == Side::Left { l } else { r })
    }
}

impl CellMap for ProjectionMap {
    fn object(&self, a: &Id) -> Result<Id> {
        self.pick(a).cloned()
    }

    fn map(&self, _: &Signature, x: &Id, _: Level) -> Result<Id> {
        self.pick(x).cloned()
    }
}

/// Projection out of a product multicategory.
pub fn projection(p: &MultiRef, side: Side) -> Result<MultiFunctor> {
    let (l, r) = p.factors().ok_or_else(|| Error::ShapeMismatch(format!("{} is not a product", p.key())))?;
    let target = if side == Side::Left { l } else { r };
    let name = if side == Side::Left { "pi_l" } else { "pi_r" };
    MultiFunctor::new(format!("{name}[{}]", p.key()), p.clone(), target, Arc::new(ProjectionMap(side)))
}

struct PairingMap {
    f: MultiFunctor,
    g: MultiFunctor,
}

impl CellMap for PairingMap {
    fn object(&self, a: &Id) -> Result<Id> {
        Ok(Id::pair(self.f.object(a)?, self.g.object(a)?))
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        Ok(Id::pair(self.f.apply(sig, x, level)?, self.g.apply(sig, x, level)?))
    }
}

/// `(f, g): M -> N x Q`.
pub fn pairing(f: &MultiFunctor, g: &MultiFunctor) -> Result<MultiFunctor> {
    if !same_multicat(&f.source, &g.source) {
        return Err(Error::BoundaryMismatch(format!("{} and {} have different sources", f.name, g.name)));
    }
    let target = product_multicat(f.target.clone(), g.target.clone())?;
    MultiFunctor::new(format!("<{},{}>", f.name, g.name), f.source.clone(), target, Arc::new(PairingMap { f: f.clone(), g: g.clone() }))
}

struct ProductMap {
    f: MultiFunctor,
    g: MultiFunctor,
}

impl CellMap for ProductMap {
    fn object(&self, a: &Id) -> Result<Id> {
        let (x, y) = a.expect_pair()?;
        Ok(Id::pair(self.f.object(x)?, self.g.object(y)?))
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        let (l, r) = split_signature(sig)?;
        let (p, q) = x.expect_pair()?;
        Ok(Id::pair(self.f.apply(&l, p, level)?, self.g.apply(&r, q, level)?))
    }
}

/// `f x g: M x M' -> N x N'`.
pub fn product_map(f: &MultiFunctor, g: &MultiFunctor) -> Result<MultiFunctor> {
    let source = product_multicat(f.source.clone(), g.source.clone())?;
    let target = product_multicat(f.target.clone(), g.target.clone())?;
    MultiFunctor::new(format!("({}x{})", f.name, g.name), source, target, Arc::new(ProductMap { f: f.clone(), g: g.clone() }))
}

/// The unique multifunctor to the terminal operad.
pub fn to_terminal(m: MultiRef) -> MultiFunctor {
    let t = terminal_operad(m.arity_bound());
    thin_map(format!("!{}", m.key()), m, t, |_| Ok(Id::star()), |_, _| Ok(Id::star())).unwrap()
}

/// Explicit per-signature tables.
#[derive(Clone, Default)]
pub struct TableMap {
    pub objects: BTreeMap<Id, Id>,
    pub cells: BTreeMap<Signature, (BTreeMap<Id, Id>, BTreeMap<Id, Id>)>,
}

impl TableMap {
    pub fn set(&mut self, sig: Signature, x: Id, level: Level, value: Id) {
        let e = self.cells.entry(sig).or_default();
        match level {
            Level::Obj => e.0.insert(x, value),
            Level::Mor => e.1.insert(x, value),
        };
    }
}

impl CellMap for TableMap {
    fn object(&self, a: &Id) -> Result<Id> {
        self.objects.get(a).cloned().ok_or_else(|| Error::MissingEntry(format!("object map at {a}")))
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        self.cells
            .get(sig)
            .and_then(|(o, m)| if level == Level::Obj { o.get(x) } else { m.get(x) })
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("image of {x} in {sig}")))
    }
}

/// Tabulates a multifunctor on every nonempty signature of its source.
pub fn tabulate(f: &MultiFunctor) -> Result<TableMap> {
    let idx = SignatureIndex::new(f.source.as_ref())?;
    let mut t = TableMap::default();
    for a in f.source.objects() {
        t.objects.insert(a.clone(), f.object(a)?);
    }
    for (sig, hom) in &idx.all {
        let mut o = BTreeMap::new();
        for x in hom.objects() {
            o.insert(x.clone(), f.apply(sig, x, Level::Obj)?);
        }
        let mut m = BTreeMap::new();
        for x in hom.morphisms() {
            m.insert(x.clone(), f.apply(sig, x, Level::Mor)?);
        }
        t.cells.insert(sig.clone(), (o, m));
    }
    Ok(t)
}

pub fn materialize_functor(f: &MultiFunctor) -> Result<MultiFunctor> {
    Ok(MultiFunctor { map: Arc::new(tabulate(f)?), ..f.clone() })
}

/// Pointwise equality on objects, 1-cells and 2-cells.
pub fn multifunctor_equal(f: &MultiFunctor, g: &MultiFunctor) -> bool {
    multifunctor_diff(f, g).is_none()
}

/// The first point where two multifunctors differ, if any.
pub fn multifunctor_diff(f: &MultiFunctor, g: &MultiFunctor) -> Option<String> {
    if !same_multicat(&f.source, &g.source) || !same_multicat(&f.target, &g.target) {
        return Some("different boundaries".into());
    }
    for a in f.source.objects() {
        if f.object(a) != g.object(a) {
            return Some(format!("object {a}"));
        }
    }
    let idx = match SignatureIndex::new(f.source.as_ref()) {
        Ok(i) => i,
        Err(e) => return Some(e.to_string()),
    };
    idx.all.par_iter().find_map_first(|(sig, hom)| {
        for level in [Level::Obj, Level::Mor] {
            for x in level.ids(hom.as_ref()) {
                let (l, r) = (f.apply(sig, x, level), g.apply(sig, x, level));
                if l != r || l.is_err() {
                    return Some(format!("{sig} {x}: {l:?} vs {r:?}"));
                }
            }
        }
        None
    })
}

/// The component functor of `f` at `sig`.
pub struct Component<'a> {
    f: &'a MultiFunctor,
    sig: Signature,
    source: CatRef,
    target: CatRef,
}

impl<'a> Component<'a> {
    pub fn new(f: &'a MultiFunctor, sig: Signature) -> Result<Component<'a>> {
        let source = f.source.hom(&sig)?;
        let target = f.target.hom(&f.image_signature(&sig)?)?;
        Ok(Component { f, sig, source, target })
    }
}

impl Functor for Component<'_> {
    fn source(&self) -> &CatRef {
        &self.source
    }

    fn target(&self) -> &CatRef {
        &self.target
    }

    fn on_object(&self, a: &Id) -> Result<Id> {
        self.f.apply(&self.sig, a, Level::Obj)
    }

    fn on_morphism(&self, m: &Id) -> Result<Id> {
        self.f.apply(&self.sig, m, Level::Mor)
    }
}

pub(crate) fn absorb_prefixed(r: &mut Report, axiom: &str, witness: &str, sub: Report) {
    let check = r.axiom(axiom);
    for c in sub.checks {
        let failures = c
            .failures
            .into_iter()
            .map(|f| Failure { witness: format!("{witness} {}: {}", c.axiom, f.witness), detail: f.detail })
            .collect();
        check.absorb(AxiomCheck { axiom: axiom.to_string(), instances: c.instances, failure_count: c.failure_count, failures });
    }
}

fn levels_for(c: &dyn Category) -> &'static [Level] {
    if c.is_thin() {
        &[Level::Obj]
    } else {
        &[Level::Obj, Level::Mor]
    }
}

/// Object typing, component functoriality, units and composition: the
/// axioms shared by symmetric and pseudo symmetric multifunctors.
pub(crate) fn check_functor_core(f: &MultiFunctor, idx: &SignatureIndex, r: &mut Report) {
    let objs = r.axiom("object-map");
    for a in f.source.objects() {
        match f.object(a) {
            Ok(b) => objs.record(f.target.objects().contains(&b), || a.to_string(), || format!("{b} is not a target object")),
            Err(e) => objs.record(false, || a.to_string(), || e.to_string()),
        }
    }
    let units = r.axiom("units");
    for a in f.source.objects() {
        let lhs = f.source.unit(a).and_then(|u| f.apply(&Signature::unary(a.clone()), &u, Level::Obj));
        let rhs = f.object(a).and_then(|b| f.target.unit(&b));
        units.compare(lhs, rhs, || a.to_string());
    }
    let comps: Vec<Report> = idx
        .all
        .par_iter()
        .map(|(sig, _)| {
            let mut part = Report::new("");
            match Component::new(f, sig.clone()) {
                Ok(c) => absorb_prefixed(&mut part, "component-functoriality", &sig.to_string(), check_functor(&c)),
                Err(e) => part.axiom("component-functoriality").fail(sig.to_string(), e.to_string()),
            }
            part
        })
        .collect();
    for p in comps {
        r.merge(p);
    }
    let bound = f.source.arity_bound();
    let mut shapes = Vec::new();
    for (i, (sig, _)) in idx.all.iter().enumerate() {
        for inner in idx.inner_choices(sig, bound) {
            shapes.push((i, inner));
        }
    }
    let parts: Vec<Report> = shapes
        .par_iter()
        .map(|(i, inner)| {
            let mut part = Report::new("");
            let check = part.axiom("composition");
            let outer = idx.sig(*i);
            let inners: Vec<Signature> = inner.iter().map(|&j| idx.sig(j).clone()).collect();
            let prep = (|| {
                let mid = Signature::compose(outer, &inners)?;
                let f_outer = f.image_signature(outer)?;
                let f_inners = inners.iter().map(|s| f.image_signature(s)).collect::<Result<Vec<_>>>()?;
                let f_mid = f.image_signature(&mid)?;
                let hom = f.target.hom(&f_mid)?;
                Ok::<_, Error>((mid, f_outer, f_inners, hom))
            })();
            let (mid, f_outer, f_inners, hom) = match prep {
                Ok(p) => p,
                Err(e) => {
                    check.fail(format!("{outer} [{}]", show_sigs(&inners)), e.to_string());
                    return part;
                }
            };
            let mut cats: Vec<&CatRef> = vec![idx.hom(*i)];
            cats.extend(inner.iter().map(|&j| idx.hom(j)));
            for &level in levels_for(hom.as_ref()) {
                let lists: Vec<&[Id]> = cats.iter().map(|c| level.ids(c.as_ref())).collect();
                for_each_tuple(&lists, |t| {
                    let lhs = f.source.gamma(outer, &inners, &t[0], &t[1..], level).and_then(|x| f.apply(&mid, &x, level));
                    let rhs = (|| {
                        let fx = f.apply(outer, &t[0], level)?;
                        let fys = t[1..].iter().zip(&inners).map(|(y, s)| f.apply(s, y, level)).collect::<Result<Vec<_>>>()?;
                        f.target.gamma(&f_outer, &f_inners, &fx, &fys, level)
                    })();
                    check.compare(lhs, rhs, || format!("{outer} [{}] at {}", show_sigs(&inners), show_ids(t)));
                });
            }
            part
        })
        .collect();
    for p in parts {
        r.merge(p);
    }
}

/// `F(x sigma) = F(x) sigma` on 1-cells and 2-cells.
fn check_symmetry(f: &MultiFunctor, idx: &SignatureIndex, r: &mut Report) {
    let parts: Vec<Report> = idx
        .all
        .par_iter()
        .map(|(sig, hom)| {
            let mut part = Report::new("");
            let check = part.axiom("symmetric-action");
            let Ok(fsig) = f.image_signature(sig) else {
                check.fail(sig.to_string(), "object map undefined".into());
                return part;
            };
            for sigma in Perm::all(sig.arity()) {
                let ssig = sig.act(&sigma).unwrap();
                for level in [Level::Obj, Level::Mor] {
                    for x in level.ids(hom.as_ref()) {
                        let lhs = f.source.act(sig, &sigma, x, level).and_then(|y| f.apply(&ssig, &y, level));
                        let rhs = f.apply(sig, x, level).and_then(|y| f.target.act(&fsig, &sigma, &y, level));
                        check.compare(lhs, rhs, || format!("{sig} sigma={sigma} {x}"));
                    }
                }
            }
            part
        })
        .collect();
    for p in parts {
        r.merge(p);
    }
}

/// Units, composition, symmetric action, and functoriality of every
/// component. The source and target are assumed valid multicategories.
pub fn check_multifunctor(f: &MultiFunctor) -> Report {
    let mut r = Report::new(&f.name);
    match SignatureIndex::new(f.source.as_ref()) {
        Ok(idx) => {
            check_functor_core(f, &idx, &mut r);
            check_symmetry(f, &idx, &mut r);
        }
        Err(e) => r.axiom("signatures").fail(f.source.key(), e.to_string()),
    }
    r
}

/// A multinatural transformation `source => target`, one unary 1-cell
/// `theta_a: F a -> G a` per object.
#[derive(Clone)]
pub struct MultiNatTrans {
    pub name: String,
    pub source: MultiFunctor,
    pub target: MultiFunctor,
    pub components: BTreeMap<Id, Id>,
}

impl fmt::Debug for MultiNatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.name, self.source.name, self.target.name)
    }
}

pub(crate) fn component(components: &BTreeMap<Id, Id>, a: &Id) -> Result<Id> {
    components.get(a).cloned().ok_or_else(|| Error::MissingEntry(format!("component at {a}")))
}

fn transformation_sig(f: &MultiFunctor, g: &MultiFunctor, a: &Id) -> Result<Signature> {
    Ok(Signature::new(vec![f.object(a)?], g.object(a)?))
}

/// Component typing, (trans1) and (trans2).
pub(crate) fn check_nat_core(f: &MultiFunctor, g: &MultiFunctor, comps: &BTreeMap<Id, Id>, r: &mut Report) {
    let n = f.target.clone();
    let typing = r.axiom("component-typing");
    for a in f.source.objects() {
        let ok = (|| {
            let s = transformation_sig(f, g, a)?;
            Ok::<_, Error>(n.hom(&s)?.has_object(&component(comps, a)?))
        })();
        match ok {
            Ok(b) => typing.record(b, || a.to_string(), || "component is not a 1-cell of (Fa;Ga)".into()),
            Err(e) => typing.record(false, || a.to_string(), || e.to_string()),
        }
    }
    let idx = match SignatureIndex::new(f.source.as_ref()) {
        Ok(i) => i,
        Err(e) => return r.axiom("signatures").fail(f.source.key(), e.to_string()),
    };
    let parts: Vec<Report> = idx
        .all
        .par_iter()
        .map(|(sig, hom)| {
            let mut part = Report::new("");
            let prep = (|| {
                let fs = f.image_signature(sig)?;
                let gs = g.image_signature(sig)?;
                let theta_sigs = sig.inputs.iter().map(|a| transformation_sig(f, g, a)).collect::<Result<Vec<_>>>()?;
                let thetas = sig.inputs.iter().map(|a| component(comps, a)).collect::<Result<Vec<_>>>()?;
                let out_sig = transformation_sig(f, g, &sig.output)?;
                let out = component(comps, &sig.output)?;
                Ok::<_, Error>((fs, gs, theta_sigs, thetas, out_sig, out))
            })();
            let (fs, gs, theta_sigs, thetas, out_sig, out) = match prep {
                Ok(p) => p,
                Err(e) => {
                    part.axiom("trans1").fail(sig.to_string(), e.to_string());
                    return part;
                }
            };
            let t1 = part.axiom("trans1");
            for x in hom.objects() {
                let lhs = g.apply(sig, x, Level::Obj).and_then(|gx| n.gamma(&gs, &theta_sigs, &gx, &thetas, Level::Obj));
                let rhs = f.apply(sig, x, Level::Obj).and_then(|fx| n.gamma(&out_sig, std::slice::from_ref(&fs), &out, &[fx], Level::Obj));
                t1.compare(lhs, rhs, || format!("{sig} {x}"));
            }
            let id_thetas = (|| {
                theta_sigs.iter().zip(&thetas).map(|(s, t)| n.hom(s)?.identity(t)).collect::<Result<Vec<_>>>()
            })();
            let id_out = n.hom(&out_sig).and_then(|h| h.identity(&out));
            let t2 = part.axiom("trans2");
            for x in hom.morphisms() {
                let lhs = (|| n.gamma(&gs, &theta_sigs, &g.apply(sig, x, Level::Mor)?, id_thetas.as_ref().map_err(Clone::clone)?, Level::Mor))();
                let rhs = (|| {
                    n.gamma(&out_sig, std::slice::from_ref(&fs), id_out.as_ref().map_err(Clone::clone)?, &[f.apply(sig, x, Level::Mor)?], Level::Mor)
                })();
                t2.compare(lhs, rhs, || format!("{sig} {x}"));
            }
            part
        })
        .collect();
    for p in parts {
        r.merge(p);
    }
}

pub fn check_multinat(t: &MultiNatTrans) -> Report {
    let mut r = Report::new(&t.name);
    if !same_multicat(&t.source.source, &t.target.source) || !same_multicat(&t.source.target, &t.target.target) {
        r.axiom("parallel").fail(t.name.clone(), "source and target functors are not parallel".into());
        return r;
    }
    check_nat_core(&t.source, &t.target, &t.components, &mut r);
    r
}

pub(crate) fn identity_components(f: &MultiFunctor) -> Result<BTreeMap<Id, Id>> {
    f.source.objects().iter().map(|a| Ok((a.clone(), f.target.unit(&f.object(a)?)?))).collect()
}

pub fn identity_nat(f: &MultiFunctor) -> Result<MultiNatTrans> {
    Ok(MultiNatTrans { name: format!("1_{}", f.name), source: f.clone(), target: f.clone(), components: identity_components(f)? })
}

/// `(zeta theta)_a = gamma(zeta_a; theta_a)`, for `theta: F => G`, `zeta: G => H`.
pub(crate) fn vert_components(
    f: &MultiFunctor,
    g: &MultiFunctor,
    h: &MultiFunctor,
    zeta: &BTreeMap<Id, Id>,
    theta: &BTreeMap<Id, Id>,
) -> Result<BTreeMap<Id, Id>> {
    let n = &f.target;
    f.source
        .objects()
        .iter()
        .map(|a| {
            let outer = transformation_sig(g, h, a)?;
            let inner = transformation_sig(f, g, a)?;
            Ok((a.clone(), n.gamma(&outer, &[inner], &component(zeta, a)?, &[component(theta, a)?], Level::Obj)?))
        })
        .collect()
}

/// `(zeta * theta)_a = gamma(zeta_{G a}; F'(theta_a))` for `theta: F => G: M -> N`
/// and `zeta: F' => G': N -> Q`.
pub(crate) fn horiz_components(
    f: &MultiFunctor,
    g: &MultiFunctor,
    f2: &MultiFunctor,
    g2: &MultiFunctor,
    zeta: &BTreeMap<Id, Id>,
    theta: &BTreeMap<Id, Id>,
) -> Result<BTreeMap<Id, Id>> {
    f.source
        .objects()
        .iter()
        .map(|a| {
            let ga = g.object(a)?;
            let outer = transformation_sig(f2, g2, &ga)?;
            let theta_sig = transformation_sig(f, g, a)?;
            let inner = f2.image_signature(&theta_sig)?;
            let image = f2.apply(&theta_sig, &component(theta, a)?, Level::Obj)?;
            Ok((a.clone(), f2.target.gamma(&outer, &[inner], &component(zeta, &ga)?, &[image], Level::Obj)?))
        })
        .collect()
}

pub(crate) fn same_functor(f: &MultiFunctor, g: &MultiFunctor) -> bool {
    (Arc::ptr_eq(&f.map, &g.map) && same_multicat(&f.source, &g.source) && same_multicat(&f.target, &g.target))
        || multifunctor_equal(f, g)
}

pub fn vert_compose(zeta: &MultiNatTrans, theta: &MultiNatTrans) -> Result<MultiNatTrans> {
    if !same_functor(&theta.target, &zeta.source) {
        return Err(Error::BoundaryMismatch(format!("{} does not start where {} ends", zeta.name, theta.name)));
    }
    let components = vert_components(&theta.source, &theta.target, &zeta.target, &zeta.components, &theta.components)?;
    Ok(MultiNatTrans {
        name: format!("{}.{}", zeta.name, theta.name),
        source: theta.source.clone(),
        target: zeta.target.clone(),
        components,
    })
}

pub fn horiz_compose(zeta: &MultiNatTrans, theta: &MultiNatTrans) -> Result<MultiNatTrans> {
    if !same_multicat(&theta.source.target, &zeta.source.source) {
        return Err(Error::BoundaryMismatch(format!("{} cannot follow {}", zeta.name, theta.name)));
    }
    let components =
        horiz_components(&theta.source, &theta.target, &zeta.source, &zeta.target, &zeta.components, &theta.components)?;
    Ok(MultiNatTrans {
        name: format!("{}*{}", zeta.name, theta.name),
        source: compose_multifunctor(&zeta.source, &theta.source)?,
        target: compose_multifunctor(&zeta.target, &theta.target)?,
        components,
    })
}

pub fn multinat_equal(a: &MultiNatTrans, b: &MultiNatTrans) -> bool {
    a.components == b.components && multifunctor_equal(&a.source, &b.source) && multifunctor_equal(&a.target, &b.target)
}

/// `a -> h(a)` on objects of `End(A)` for a monoid endomorphism `h`.
pub fn monoid_hom_functor(
    name: &str,
    source: MultiRef,
    target: MultiRef,
    table: HashMap<Id, Id>,
) -> Result<MultiFunctor> {
    let t = Arc::new(table);
    thin_map(
        name,
        source,
        target,
        move |a| t.get(a).cloned().ok_or_else(|| Error::UnknownObject(a.to_string())),
        |_, x| Ok(x.clone()),
    )
}

/// The diagonal `M -> M x M`.
pub fn diagonal(m: MultiRef) -> Result<MultiFunctor> {
    let id = identity_multifunctor(m);
    pairing(&id, &id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{barratt_eccles, end_of_monoid, weight_operad, FinCommMonoid};

    fn shift(m: MultiRef, mon: &FinCommMonoid, h: usize, c: usize) -> MultiFunctor {
        // a -> h a + (n - 1) c on Z/k
        let k = mon.elements().len();
        let mon = mon.clone();
        thin_map(format!("w{h},{c}"), m.clone(), m, |a| Ok(a.clone()), move |sig, x| {
            let v: usize = x.to_string().parse().unwrap();
            let n = sig.arity() as isize - 1;
            let out = (h as isize * v as isize + n * c as isize).rem_euclid(k as isize) as usize;
            Ok(mon.elements()[out].clone())
        })
        .unwrap()
    }

    #[test]
    fn identity_and_projection_pass() {
        let be = barratt_eccles(2);
        assert!(check_multifunctor(&identity_multifunctor(be.clone())).passed());
        let z3 = end_of_monoid(FinCommMonoid::cyclic(3), 2).unwrap();
        let p = product_multicat(z3, be).unwrap();
        let r = check_multifunctor(&projection(&p, Side::Left).unwrap());
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn weight_shifts_are_multifunctors() {
        let mon = FinCommMonoid::cyclic(3);
        let w = weight_operad(mon.clone(), 3);
        let f = shift(w.clone(), &mon, 2, 1);
        let r = check_multifunctor(&f);
        assert!(r.passed(), "{r}");
        // h must be additive: a constant shift on 1-cells breaks units.
        let bad = thin_map("bad", w.clone(), w, |a| Ok(a.clone()), |_, _| Ok(Id::name("1"))).unwrap();
        assert!(!check_multifunctor(&bad).passed());
    }

    #[test]
    fn composition_and_identity_laws() {
        let mon = FinCommMonoid::cyclic(3);
        let w = weight_operad(mon.clone(), 3);
        let f = shift(w.clone(), &mon, 2, 1);
        let g = shift(w.clone(), &mon, 1, 2);
        let h = shift(w.clone(), &mon, 2, 2);
        let id = identity_multifunctor(w.clone());
        assert!(multifunctor_equal(&compose_multifunctor(&f, &id).unwrap(), &f));
        let l = compose_multifunctor(&h, &compose_multifunctor(&g, &f).unwrap()).unwrap();
        let r = compose_multifunctor(&compose_multifunctor(&h, &g).unwrap(), &f).unwrap();
        assert!(multifunctor_equal(&l, &r));
        assert!(check_multifunctor(&l).passed());
        assert!(!multifunctor_equal(&f, &g));
    }

    #[test]
    fn transformations_between_shifts() {
        // theta = c - c' is a transformation from w(h,c) to w(h,c').
        let mon = FinCommMonoid::cyclic(3);
        let w = weight_operad(mon.clone(), 3);
        let f = shift(w.clone(), &mon, 1, 2);
        let g = shift(w.clone(), &mon, 1, 0);
        let mut comps = BTreeMap::new();
        comps.insert(Id::star(), Id::name("2"));
        let t = MultiNatTrans { name: "t".into(), source: f.clone(), target: g.clone(), components: comps.clone() };
        let r = check_multinat(&t);
        assert!(r.passed(), "{r}");
        comps.insert(Id::star(), Id::name("1"));
        let bad = MultiNatTrans { components: comps, ..t.clone() };
        let r = check_multinat(&bad);
        assert!(!r.passed());
        assert!(r.get("trans1").unwrap().failures[0].witness.starts_with('('));
        let id = identity_nat(&f).unwrap();
        assert!(check_multinat(&id).passed());
        assert_eq!(vert_compose(&t, &id).unwrap().components, t.components);
    }
}
