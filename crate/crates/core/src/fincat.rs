//! Finite categories, functors and natural transformations.
//!
//! Every hom category of a multicategory is a [`Category`]. Table-backed
//! categories ([`FinCat`]) come from files or from materialising a formula;
//! [`ChaoticCategory`], [`DiscreteCategory`] and [`ProductCategory`] compute
//! their structure on demand behind the same interface.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::id::Id;
use crate::report::Report;

pub type CatRef = Arc<dyn Category>;
pub type FunctorRef = Arc<dyn Functor>;

pub trait Category: Send + Sync + fmt::Debug {
    fn objects(&self) -> &[Id];
    fn morphisms(&self) -> &[Id];
    fn source(&self, m: &Id) -> Result<Id>;
    fn target(&self, m: &Id) -> Result<Id>;
    fn identity(&self, a: &Id) -> Result<Id>;
    /// `g` after `f`.
    fn compose(&self, g: &Id, f: &Id) -> Result<Id>;
    fn has_object(&self, a: &Id) -> bool;
    fn has_morphism(&self, m: &Id) -> bool;
    /// At most one morphism between any two objects.
    fn is_thin(&self) -> bool;
    /// Structure computed from a formula rather than read from a table.
    fn is_formula(&self) -> bool {
        true
    }

    fn hom_set(&self, a: &Id, b: &Id) -> Vec<Id> {
        self.morphisms()
            .iter()
            .filter(|m| self.source(m).as_ref() == Ok(a) && self.target(m).as_ref() == Ok(b))
            .cloned()
            .collect()
    }

    fn is_empty(&self) -> bool {
        self.objects().is_empty()
    }
}

fn unknown_object(a: &Id) -> Error {
    Error::UnknownObject(a.to_string())
}

fn unknown_morphism(m: &Id) -> Error {
    Error::UnknownMorphism(m.to_string())
}

/// A category given by explicit tables.
#[derive(Clone)]
pub struct FinCat {
    objects: Vec<Id>,
    morphisms: Vec<Id>,
    object_set: HashSet<Id>,
    ends: HashMap<Id, (Id, Id)>,
    identities: HashMap<Id, Id>,
    comp: HashMap<(Id, Id), Id>,
    thin: bool,
}

impl FinCat {
    /// Builds a table category. Only referential integrity is enforced here;
    /// the category laws are reported by [`check_category`].
    pub fn new(
        objects: Vec<Id>,
        morphisms: Vec<(Id, Id, Id)>,
        identities: Vec<(Id, Id)>,
        composites: Vec<((Id, Id), Id)>,
    ) -> Result<FinCat> {
        let object_set: HashSet<Id> = objects.iter().cloned().collect();
        if object_set.len() != objects.len() {
            return Err(Error::InvalidInput("duplicate object id".into()));
        }
        let mut ends = HashMap::new();
        let mut ids = Vec::with_capacity(morphisms.len());
        for (m, s, t) in morphisms {
            for o in [&s, &t] {
                if !object_set.contains(o) {
                    return Err(unknown_object(o));
                }
            }
            if ends.insert(m.clone(), (s, t)).is_some() {
                return Err(Error::InvalidInput(format!("duplicate morphism id {m}")));
            }
            ids.push(m);
        }
        let mut identity_map = HashMap::new();
        for (a, m) in identities {
            if !object_set.contains(&a) {
                return Err(unknown_object(&a));
            }
            if !ends.contains_key(&m) {
                return Err(unknown_morphism(&m));
            }
            identity_map.insert(a, m);
        }
        let mut comp = HashMap::new();
        for ((g, f), r) in composites {
            for m in [&g, &f, &r] {
                if !ends.contains_key(m) {
                    return Err(unknown_morphism(m));
                }
            }
            comp.insert((g, f), r);
        }
        let mut pairs = HashSet::new();
        let thin = ends.values().all(|e| pairs.insert(e.clone()));
        Ok(FinCat { objects, morphisms: ids, object_set, ends, identities: identity_map, comp, thin })
    }

    /// Tabulates any category.
    pub fn from_category(c: &dyn Category) -> Result<FinCat> {
        let morphisms = c
            .morphisms()
            .iter()
            .map(|m| Ok((m.clone(), c.source(m)?, c.target(m)?)))
            .collect::<Result<Vec<_>>>()?;
        let identities =
            c.objects().iter().map(|a| Ok((a.clone(), c.identity(a)?))).collect::<Result<Vec<_>>>()?;
        let by_source = group_by_source(c)?;
        let mut composites = Vec::new();
        for (f, _, b) in &morphisms {
            for g in by_source.get(b).into_iter().flatten() {
                composites.push(((g.clone(), f.clone()), c.compose(g, f)?));
            }
        }
        FinCat::new(c.objects().to_vec(), morphisms, identities, composites)
    }

    pub fn ends(&self, m: &Id) -> Option<&(Id, Id)> {
        self.ends.get(m)
    }

    pub fn identity_table(&self) -> BTreeMap<Id, Id> {
        self.identities.iter().map(|(a, m)| (a.clone(), m.clone())).collect()
    }

    pub fn composite_table(&self) -> BTreeMap<(Id, Id), Id> {
        self.comp.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn set_composite(&mut self, g: Id, f: Id, result: Id) {
        self.comp.insert((g, f), result);
    }

    pub fn set_identity(&mut self, a: Id, m: Id) {
        self.identities.insert(a, m);
    }
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinCat({} objects, {} morphisms)", self.objects.len(), self.morphisms.len())
    }
}

impl Category for FinCat {
    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn morphisms(&self) -> &[Id] {
        &self.morphisms
    }

    fn source(&self, m: &Id) -> Result<Id> {
        self.ends.get(m).map(|e| e.0.clone()).ok_or_else(|| unknown_morphism(m))
    }

    fn target(&self, m: &Id) -> Result<Id> {
        self.ends.get(m).map(|e| e.1.clone()).ok_or_else(|| unknown_morphism(m))
    }

    fn identity(&self, a: &Id) -> Result<Id> {
        self.identities.get(a).cloned().ok_or_else(|| unknown_object(a))
    }

    fn compose(&self, g: &Id, f: &Id) -> Result<Id> {
        self.comp
            .get(&(g.clone(), f.clone()))
            .cloned()
            .ok_or_else(|| Error::NotComposable { g: g.to_string(), f: f.to_string() })
    }

    fn has_object(&self, a: &Id) -> bool {
        self.object_set.contains(a)
    }

    fn has_morphism(&self, m: &Id) -> bool {
        self.ends.contains_key(m)
    }

    fn is_thin(&self) -> bool {
        self.thin
    }

    fn is_formula(&self) -> bool {
        false
    }

    fn hom_set(&self, a: &Id, b: &Id) -> Vec<Id> {
        self.morphisms.iter().filter(|m| self.ends[*m] == (a.clone(), b.clone())).cloned().collect()
    }
}

/// Exactly one morphism `{a>b}` between each ordered pair of objects.
pub struct ChaoticCategory {
    objects: Vec<Id>,
    morphisms: OnceLock<Vec<Id>>,
}

impl ChaoticCategory {
    pub fn new(mut objects: Vec<Id>) -> ChaoticCategory {
        objects.sort();
        objects.dedup();
        ChaoticCategory { objects, morphisms: OnceLock::new() }
    }
}

impl fmt::Debug for ChaoticCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chaotic({} objects)", self.objects.len())
    }
}

pub fn chaotic(objects: Vec<Id>) -> ChaoticCategory {
    ChaoticCategory::new(objects)
}

impl Category for ChaoticCategory {
    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn morphisms(&self) -> &[Id] {
        self.morphisms.get_or_init(|| {
            let mut v = Vec::with_capacity(self.objects.len() * self.objects.len());
            for a in &self.objects {
                for b in &self.objects {
                    v.push(Id::arrow(a.clone(), b.clone()));
                }
            }
            v
        })
    }

    fn source(&self, m: &Id) -> Result<Id> {
        self.has_morphism(m).then(|| m.as_arrow().unwrap().0.clone()).ok_or_else(|| unknown_morphism(m))
    }

    fn target(&self, m: &Id) -> Result<Id> {
        self.has_morphism(m).then(|| m.as_arrow().unwrap().1.clone()).ok_or_else(|| unknown_morphism(m))
    }

    fn identity(&self, a: &Id) -> Result<Id> {
        self.has_object(a).then(|| Id::arrow(a.clone(), a.clone())).ok_or_else(|| unknown_object(a))
    }

    fn compose(&self, g: &Id, f: &Id) -> Result<Id> {
        match (g.as_arrow(), f.as_arrow()) {
            (Some((b2, c)), Some((a, b))) if b == b2 && self.has_morphism(g) && self.has_morphism(f) => {
                Ok(Id::arrow(a.clone(), c.clone()))
            }
            _ => Err(Error::NotComposable { g: g.to_string(), f: f.to_string() }),
        }
    }

    fn has_object(&self, a: &Id) -> bool {
        self.objects.binary_search(a).is_ok()
    }

    fn has_morphism(&self, m: &Id) -> bool {
        m.as_arrow().is_some_and(|(a, b)| self.has_object(a) && self.has_object(b))
    }

    fn is_thin(&self) -> bool {
        true
    }

    fn hom_set(&self, a: &Id, b: &Id) -> Vec<Id> {
        if self.has_object(a) && self.has_object(b) {
            vec![Id::arrow(a.clone(), b.clone())]
        } else {
            Vec::new()
        }
    }
}

/// Only identity morphisms, written `{a>a}`.
pub struct DiscreteCategory {
    objects: Vec<Id>,
    morphisms: Vec<Id>,
}

impl DiscreteCategory {
    pub fn new(mut objects: Vec<Id>) -> DiscreteCategory {
        objects.sort();
        objects.dedup();
        let morphisms = objects.iter().map(|a| Id::arrow(a.clone(), a.clone())).collect();
        DiscreteCategory { objects, morphisms }
    }
}

impl fmt::Debug for DiscreteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Discrete({} objects)", self.objects.len())
    }
}

impl Category for DiscreteCategory {
    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn morphisms(&self) -> &[Id] {
        &self.morphisms
    }

    fn source(&self, m: &Id) -> Result<Id> {
        self.has_morphism(m).then(|| m.as_arrow().unwrap().0.clone()).ok_or_else(|| unknown_morphism(m))
    }

    fn target(&self, m: &Id) -> Result<Id> {
        self.source(m)
    }

    fn identity(&self, a: &Id) -> Result<Id> {
        self.has_object(a).then(|| Id::arrow(a.clone(), a.clone())).ok_or_else(|| unknown_object(a))
    }

    fn compose(&self, g: &Id, f: &Id) -> Result<Id> {
        if g == f && self.has_morphism(g) {
            Ok(g.clone())
        } else {
            Err(Error::NotComposable { g: g.to_string(), f: f.to_string() })
        }
    }

    fn has_object(&self, a: &Id) -> bool {
        self.objects.binary_search(a).is_ok()
    }

    fn has_morphism(&self, m: &Id) -> bool {
        m.as_arrow().is_some_and(|(a, b)| a == b && self.has_object(a))
    }

    fn is_thin(&self) -> bool {
        true
    }
}

/// A one-object category whose morphisms are the elements of a monoid.
pub struct MonoidCategory {
    objects: Vec<Id>,
    elements: Vec<Id>,
    unit: Id,
    op: Arc<dyn Fn(&Id, &Id) -> Result<Id> + Send + Sync>,
}

impl MonoidCategory {
    pub fn new(
        elements: Vec<Id>,
        unit: Id,
        op: Arc<dyn Fn(&Id, &Id) -> Result<Id> + Send + Sync>,
    ) -> MonoidCategory {
        MonoidCategory { objects: vec![Id::star()], elements, unit, op }
    }
}

impl fmt::Debug for MonoidCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monoid({} elements)", self.elements.len())
    }
}

impl Category for MonoidCategory {
    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn morphisms(&self) -> &[Id] {
        &self.elements
    }

    fn source(&self, m: &Id) -> Result<Id> {
        self.has_morphism(m).then(Id::star).ok_or_else(|| unknown_morphism(m))
    }

    fn target(&self, m: &Id) -> Result<Id> {
        self.source(m)
    }

    fn identity(&self, a: &Id) -> Result<Id> {
        self.has_object(a).then(|| self.unit.clone()).ok_or_else(|| unknown_object(a))
    }

    fn compose(&self, g: &Id, f: &Id) -> Result<Id> {
        if self.has_morphism(g) && self.has_morphism(f) {
            (self.op)(g, f)
        } else {
            Err(Error::NotComposable { g: g.to_string(), f: f.to_string() })
        }
    }

    fn has_object(&self, a: &Id) -> bool {
        *a == self.objects[0]
    }

    fn has_morphism(&self, m: &Id) -> bool {
        self.elements.contains(m)
    }

    fn is_thin(&self) -> bool {
        self.elements.len() <= 1
    }
}

/// Product of finitely many categories. Objects and morphisms are tuples.
pub struct ProductCategory {
    factors: Vec<CatRef>,
    objects: Vec<Id>,
    morphisms: OnceLock<Vec<Id>>,
}

pub fn product_cat(factors: Vec<CatRef>) -> ProductCategory {
    let objects = cartesian(factors.iter().map(|c| c.objects()).collect::<Vec<_>>().as_slice());
    ProductCategory { factors, objects, morphisms: OnceLock::new() }
}

/// All tuples drawn from the given lists, in lexicographic order.
pub fn cartesian(lists: &[&[Id]]) -> Vec<Id> {
    let mut out = Vec::new();
    for_each_tuple(lists, |t| out.push(Id::tuple(t.to_vec())));
    out
}

/// Calls `f` on every tuple of the cartesian product, odometer order.
pub fn for_each_tuple(lists: &[&[Id]], mut f: impl FnMut(&[Id])) {
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; lists.len()];
    let mut cur: Vec<Id> = lists.iter().map(|l| l[0].clone()).collect();
    loop {
        f(&cur);
        let mut k = lists.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                cur[k] = lists[k][idx[k]].clone();
                break;
            }
            idx[k] = 0;
            cur[k] = lists[k][0].clone();
        }
    }
}

impl ProductCategory {
    pub fn factors(&self) -> &[CatRef] {
        &self.factors
    }

    fn split<'a>(&self, x: &'a Id) -> Option<&'a [Id]> {
        x.as_tuple().filter(|t| t.len() == self.factors.len())
    }

    fn componentwise(&self, x: &Id, f: impl Fn(&CatRef, &Id) -> Result<Id>) -> Result<Id> {
        let parts = self.split(x).ok_or_else(|| unknown_morphism(x))?;
        let v = self.factors.iter().zip(parts).map(|(c, p)| f(c, p)).collect::<Result<Vec<_>>>()?;
        Ok(Id::tuple(v))
    }
}

impl fmt::Debug for ProductCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.factors.iter()).finish()
    }
}

impl Category for ProductCategory {
    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn morphisms(&self) -> &[Id] {
        self.morphisms.get_or_init(|| {
            cartesian(self.factors.iter().map(|c| c.morphisms()).collect::<Vec<_>>().as_slice())
        })
    }

    fn source(&self, m: &Id) -> Result<Id> {
        self.componentwise(m, |c, p| c.source(p))
    }

    fn target(&self, m: &Id) -> Result<Id> {
        self.componentwise(m, |c, p| c.target(p))
    }

    fn identity(&self, a: &Id) -> Result<Id> {
        self.componentwise(a, |c, p| c.identity(p)).map_err(|_| unknown_object(a))
    }

    fn compose(&self, g: &Id, f: &Id) -> Result<Id> {
        let not = || Error::NotComposable { g: g.to_string(), f: f.to_string() };
        let (gs, fs) = (self.split(g).ok_or_else(not)?, self.split(f).ok_or_else(not)?);
        let v = self
            .factors
            .iter()
            .zip(gs.iter().zip(fs))
            .map(|(c, (x, y))| c.compose(x, y))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| not())?;
        Ok(Id::tuple(v))
    }

    fn has_object(&self, a: &Id) -> bool {
        self.split(a).is_some_and(|p| self.factors.iter().zip(p).all(|(c, x)| c.has_object(x)))
    }

    fn has_morphism(&self, m: &Id) -> bool {
        self.split(m).is_some_and(|p| self.factors.iter().zip(p).all(|(c, x)| c.has_morphism(x)))
    }

    fn is_thin(&self) -> bool {
        self.factors.iter().all(|c| c.is_thin())
    }

    fn is_formula(&self) -> bool {
        self.factors.iter().all(|c| c.is_formula())
    }

    fn hom_set(&self, a: &Id, b: &Id) -> Vec<Id> {
        let (Some(pa), Some(pb)) = (self.split(a), self.split(b)) else {
            return Vec::new();
        };
        let sets: Vec<Vec<Id>> = self.factors.iter().zip(pa.iter().zip(pb)).map(|(c, (x, y))| c.hom_set(x, y)).collect();
        cartesian(sets.iter().map(Vec::as_slice).collect::<Vec<_>>().as_slice())
    }
}

fn group_by_source(c: &dyn Category) -> Result<HashMap<Id, Vec<Id>>> {
    let mut out: HashMap<Id, Vec<Id>> = HashMap::new();
    for m in c.morphisms() {
        out.entry(c.source(m)?).or_default().push(m.clone());
    }
    Ok(out)
}

/// Reports every violated category law with a witness.
pub fn check_category(c: &dyn Category) -> Report {
    let mut r = Report::new(format!("{c:?}"));
    let ends: HashMap<&Id, Result<(Id, Id)>> =
        c.morphisms().iter().map(|m| (m, c.source(m).and_then(|s| Ok((s, c.target(m)?))))).collect();
    let check = r.axiom("endpoints");
    for (m, e) in &ends {
        match e {
            Ok((s, t)) => check.record(c.has_object(s) && c.has_object(t), || m.to_string(), || "endpoint is not an object".into()),
            Err(err) => check.record(false, || m.to_string(), || err.to_string()),
        }
    }
    let mut by_source: BTreeMap<Id, Vec<Id>> = BTreeMap::new();
    for (m, e) in &ends {
        if let Ok((s, _)) = e {
            by_source.entry(s.clone()).or_default().push((*m).clone());
        }
    }
    for v in by_source.values_mut() {
        v.sort();
    }
    let tgt = |m: &Id| ends.get(m).and_then(|e| e.as_ref().ok()).map(|e| e.1.clone());
    let src = |m: &Id| ends.get(m).and_then(|e| e.as_ref().ok()).map(|e| e.0.clone());

    let ident = r.axiom("identity");
    for a in c.objects() {
        match c.identity(a) {
            Ok(i) if src(&i).as_ref() == Some(a) && tgt(&i).as_ref() == Some(a) => {
                for f in by_source.get(a).into_iter().flatten() {
                    ident.compare(c.compose(f, &i), Ok::<_, Error>(f.clone()), || format!("{f} . id_{a}"));
                }
                for f in c.morphisms() {
                    if tgt(f).as_ref() == Some(a) {
                        ident.compare(c.compose(&i, f), Ok::<_, Error>(f.clone()), || format!("id_{a} . {f}"));
                    }
                }
            }
            Ok(i) => ident.record(false, || a.to_string(), || format!("identity {i} has wrong endpoints")),
            Err(e) => ident.record(false, || a.to_string(), || e.to_string()),
        }
    }

    let mut sorted: Vec<&Id> = c.morphisms().iter().collect();
    sorted.sort();
    let comp = r.axiom("composition");
    for f in &sorted {
        let Some(b) = tgt(f) else { continue };
        for g in c.morphisms() {
            let composable = src(g).as_ref() == Some(&b);
            match c.compose(g, f) {
                Ok(h) if composable => comp.record(
                    src(&h) == src(f) && tgt(&h) == tgt(g),
                    || format!("{g} . {f}"),
                    || format!("composite {h} has wrong endpoints"),
                ),
                Ok(h) => comp.record(false, || format!("{g} . {f}"), || format!("defined as {h} on a non-composable pair")),
                Err(e) if composable => comp.record(false, || format!("{g} . {f}"), || e.to_string()),
                Err(_) => {}
            }
        }
    }

    let assoc = r.axiom("associativity");
    for f in &sorted {
        let Some(b) = tgt(f) else { continue };
        for g in by_source.get(&b).into_iter().flatten() {
            let Some(cc) = tgt(g) else { continue };
            for h in by_source.get(&cc).into_iter().flatten() {
                let lhs = c.compose(g, f).and_then(|gf| c.compose(h, &gf));
                let rhs = c.compose(h, g).and_then(|hg| c.compose(&hg, f));
                assoc.compare(lhs, rhs, || format!("({h}, {g}, {f})"));
            }
        }
    }
    r
}

pub trait Functor: Send + Sync {
    fn source(&self) -> &CatRef;
    fn target(&self) -> &CatRef;
    fn on_object(&self, a: &Id) -> Result<Id>;
    fn on_morphism(&self, m: &Id) -> Result<Id>;
}

/// A functor given by explicit tables.
#[derive(Clone)]
pub struct FinFunctor {
    source: CatRef,
    target: CatRef,
    obj_map: HashMap<Id, Id>,
    mor_map: HashMap<Id, Id>,
}

impl FinFunctor {
    pub fn new(source: CatRef, target: CatRef, obj_map: HashMap<Id, Id>, mor_map: HashMap<Id, Id>) -> FinFunctor {
        FinFunctor { source, target, obj_map, mor_map }
    }

    /// Tabulates any functor.
    pub fn from_functor(f: &dyn Functor) -> Result<FinFunctor> {
        let obj_map = f.source().objects().iter().map(|a| Ok((a.clone(), f.on_object(a)?))).collect::<Result<_>>()?;
        let mor_map =
            f.source().morphisms().iter().map(|m| Ok((m.clone(), f.on_morphism(m)?))).collect::<Result<_>>()?;
        Ok(FinFunctor::new(f.source().clone(), f.target().clone(), obj_map, mor_map))
    }

    pub fn set_object(&mut self, a: Id, b: Id) {
        self.obj_map.insert(a, b);
    }

    pub fn set_morphism(&mut self, m: Id, n: Id) {
        self.mor_map.insert(m, n);
    }

    pub fn object_table(&self) -> BTreeMap<Id, Id> {
        self.obj_map.iter().map(|(a, b)| (a.clone(), b.clone())).collect()
    }

    pub fn morphism_table(&self) -> BTreeMap<Id, Id> {
        self.mor_map.iter().map(|(a, b)| (a.clone(), b.clone())).collect()
    }
}

impl Functor for FinFunctor {
    fn source(&self) -> &CatRef {
        &self.source
    }

    fn target(&self) -> &CatRef {
        &self.target
    }

    fn on_object(&self, a: &Id) -> Result<Id> {
        self.obj_map.get(a).cloned().ok_or_else(|| unknown_object(a))
    }

    fn on_morphism(&self, m: &Id) -> Result<Id> {
        self.mor_map.get(m).cloned().ok_or_else(|| unknown_morphism(m))
    }
}

pub struct IdentityFunctor(CatRef);

pub fn identity_functor(c: CatRef) -> IdentityFunctor {
    IdentityFunctor(c)
}

impl Functor for IdentityFunctor {
    fn source(&self) -> &CatRef {
        &self.0
    }

    fn target(&self) -> &CatRef {
        &self.0
    }

    fn on_object(&self, a: &Id) -> Result<Id> {
        if self.0.has_object(a) { Ok(a.clone()) } else { Err(unknown_object(a)) }
    }

    fn on_morphism(&self, m: &Id) -> Result<Id> {
        if self.0.has_morphism(m) { Ok(m.clone()) } else { Err(unknown_morphism(m)) }
    }
}

pub struct ComposedFunctor {
    g: FunctorRef,
    f: FunctorRef,
}

/// `g` after `f`.
pub fn compose_functor(g: FunctorRef, f: FunctorRef) -> Result<ComposedFunctor> {
    if !same_category(f.target().as_ref(), g.source().as_ref()) {
        return Err(Error::BoundaryMismatch("target of f differs from source of g".into()));
    }
    Ok(ComposedFunctor { g, f })
}

impl Functor for ComposedFunctor {
    fn source(&self) -> &CatRef {
        self.f.source()
    }

    fn target(&self) -> &CatRef {
        self.g.target()
    }

    fn on_object(&self, a: &Id) -> Result<Id> {
        self.g.on_object(&self.f.on_object(a)?)
    }

    fn on_morphism(&self, m: &Id) -> Result<Id> {
        self.g.on_morphism(&self.f.on_morphism(m)?)
    }
}

/// Same objects, morphisms and endpoints.
pub fn same_category(a: &dyn Category, b: &dyn Category) -> bool {
    if std::ptr::addr_eq(a, b) {
        return true;
    }
    a.objects() == b.objects()
        && a.morphisms() == b.morphisms()
        && a.morphisms().iter().all(|m| a.source(m) == b.source(m) && a.target(m) == b.target(m))
}

/// Pointwise equality on objects and morphisms.
pub fn functor_equal(f: &dyn Functor, g: &dyn Functor) -> bool {
    same_category(f.source().as_ref(), g.source().as_ref())
        && same_category(f.target().as_ref(), g.target().as_ref())
        && f.source().objects().iter().all(|a| f.on_object(a) == g.on_object(a))
        && f.source().morphisms().iter().all(|m| f.on_morphism(m) == g.on_morphism(m))
}

pub fn check_functor(f: &dyn Functor) -> Report {
    let (s, t) = (f.source(), f.target());
    let mut r = Report::new("functor");
    let objs = r.axiom("objects");
    for a in s.objects() {
        match f.on_object(a) {
            Ok(b) => objs.record(t.has_object(&b), || a.to_string(), || format!("{b} is not a target object")),
            Err(e) => objs.record(false, || a.to_string(), || e.to_string()),
        }
    }
    let ends = r.axiom("endpoints");
    for m in s.morphisms() {
        let got = f.on_morphism(m).and_then(|n| Ok((t.source(&n)?, t.target(&n)?)));
        let want = s.source(m).and_then(|x| f.on_object(&x)).and_then(|x| Ok((x, s.target(m).and_then(|y| f.on_object(&y))?)));
        match (got, want) {
            (Ok(g), Ok(w)) => ends.record(g == w, || m.to_string(), || format!("image runs {} -> {}, expected {} -> {}", g.0, g.1, w.0, w.1)),
            (Err(e), _) | (_, Err(e)) => ends.record(false, || m.to_string(), || e.to_string()),
        }
    }
    let ids = r.axiom("identities");
    for a in s.objects() {
        let lhs = s.identity(a).and_then(|i| f.on_morphism(&i));
        let rhs = f.on_object(a).and_then(|b| t.identity(&b));
        ids.compare(lhs, rhs, || a.to_string());
    }
    let comp = r.axiom("composition");
    if let Ok(by_source) = group_by_source(s.as_ref()) {
        for m in s.morphisms() {
            let Ok(b) = s.target(m) else { continue };
            for g in by_source.get(&b).into_iter().flatten() {
                let lhs = s.compose(g, m).and_then(|gm| f.on_morphism(&gm));
                let rhs = f.on_morphism(g).and_then(|fg| t.compose(&fg, &f.on_morphism(m)?));
                comp.compare(lhs, rhs, || format!("{g} . {m}"));
            }
        }
    }
    r
}

pub trait NatTrans: Send + Sync {
    fn source(&self) -> &FunctorRef;
    fn target(&self) -> &FunctorRef;
    fn component(&self, a: &Id) -> Result<Id>;
}

pub struct FinNatTrans {
    source: FunctorRef,
    target: FunctorRef,
    components: HashMap<Id, Id>,
}

impl FinNatTrans {
    /// Validates that every component runs from `F a` to `G a`.
    pub fn new(source: FunctorRef, target: FunctorRef, components: HashMap<Id, Id>) -> Result<FinNatTrans> {
        let t = FinNatTrans::new_unchecked(source, target, components);
        let cat = t.source.target().clone();
        for a in t.source.source().objects() {
            let c = t.component(a)?;
            let want = (t.source.on_object(a)?, t.target.on_object(a)?);
            let got = (cat.source(&c)?, cat.target(&c)?);
            if got != want {
                return Err(Error::Endpoint {
                    object: a.to_string(),
                    detail: format!("{c} runs {} -> {}, expected {} -> {}", got.0, got.1, want.0, want.1),
                });
            }
        }
        Ok(t)
    }

    pub fn new_unchecked(source: FunctorRef, target: FunctorRef, components: HashMap<Id, Id>) -> FinNatTrans {
        FinNatTrans { source, target, components }
    }

    pub fn component_table(&self) -> BTreeMap<Id, Id> {
        self.components.iter().map(|(a, c)| (a.clone(), c.clone())).collect()
    }

    pub fn identity(f: FunctorRef) -> Result<FinNatTrans> {
        let components = f
            .source()
            .objects()
            .iter()
            .map(|a| Ok((a.clone(), f.target().identity(&f.on_object(a)?)?)))
            .collect::<Result<_>>()?;
        FinNatTrans::new(f.clone(), f, components)
    }
}

impl NatTrans for FinNatTrans {
    fn source(&self) -> &FunctorRef {
        &self.source
    }

    fn target(&self) -> &FunctorRef {
        &self.target
    }

    fn component(&self, a: &Id) -> Result<Id> {
        self.components.get(a).cloned().ok_or_else(|| unknown_object(a))
    }
}

pub fn check_nattrans(t: &dyn NatTrans) -> Report {
    let (f, g) = (t.source(), t.target());
    let (s, c) = (f.source(), f.target());
    let mut r = Report::new("natural transformation");
    let ends = r.axiom("endpoints");
    for a in s.objects() {
        let got = t.component(a).and_then(|x| Ok((c.source(&x)?, c.target(&x)?)));
        let want = f.on_object(a).and_then(|x| Ok((x, g.on_object(a)?)));
        ends.compare(
            got.map(|(x, y)| format!("{x} -> {y}")),
            want.map(|(x, y)| format!("{x} -> {y}")),
            || a.to_string(),
        );
    }
    let nat = r.axiom("naturality");
    for m in s.morphisms() {
        let lhs = (|| c.compose(&g.on_morphism(m)?, &t.component(&s.source(m)?)?))();
        let rhs = (|| c.compose(&t.component(&s.target(m)?)?, &f.on_morphism(m)?))();
        nat.compare(lhs, rhs, || m.to_string());
    }
    r
}

/// A two-sided inverse in `c`, if one exists.
pub fn find_inverse(c: &dyn Category, m: &Id) -> Option<Id> {
    let (a, b) = (c.source(m).ok()?, c.target(m).ok()?);
    let (ia, ib) = (c.identity(&a).ok()?, c.identity(&b).ok()?);
    c.hom_set(&b, &a).into_iter().find(|n| {
        c.compose(n, m).as_ref() == Ok(&ia) && c.compose(m, n).as_ref() == Ok(&ib)
    })
}

pub fn is_natural_iso(t: &dyn NatTrans) -> bool {
    let c = t.source().target();
    t.source().source().objects().iter().all(|a| t.component(a).is_ok_and(|x| find_inverse(c.as_ref(), &x).is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(names: &[&str]) -> Vec<Id> {
        names.iter().map(|n| Id::name(n)).collect()
    }

    fn terminal() -> FinCat {
        let s = Id::star();
        let m = Id::name("1");
        FinCat::new(vec![s.clone()], vec![(m.clone(), s.clone(), s.clone())], vec![(s, m.clone())], vec![((m.clone(), m.clone()), m)])
            .unwrap()
    }

    fn sigma(n: usize) -> Vec<Id> {
        crate::perm::Perm::all(n).into_iter().map(Id::from).collect()
    }

    #[test]
    fn terminal_passes() {
        assert!(check_category(&terminal()).passed());
    }

    #[test]
    fn chaotic_counts_and_laws() {
        let one = chaotic(vec![Id::star()]);
        assert_eq!((one.objects().len(), one.morphisms().len()), (1, 1));
        let two = chaotic(sigma(2));
        assert_eq!((two.objects().len(), two.morphisms().len()), (2, 4));
        let three = chaotic(sigma(3));
        assert_eq!((three.objects().len(), three.morphisms().len()), (6, 36));
        let rep = check_category(&three);
        assert!(rep.passed(), "{rep}");
        assert!(rep.get("associativity").unwrap().instances == 6usize.pow(4) as u64);
        assert!(check_category(&FinCat::from_category(&three).unwrap()).passed());
    }

    #[test]
    fn corrupted_composite_is_reported_once() {
        let mut c = FinCat::from_category(&chaotic(ids(&["a", "b", "c"]))).unwrap();
        let ab = Id::arrow("a".into(), "b".into());
        let bb = Id::arrow("b".into(), "b".into());
        // b->b . a->b should be a->b; point it at a->a instead.
        c.set_composite(bb, ab.clone(), Id::arrow("a".into(), "a".into()));
        let rep = check_category(&c);
        assert!(!rep.passed());
        let ident = rep.get("identity").unwrap();
        assert_eq!(ident.failure_count, 1);
        assert_eq!(ident.failures[0].witness, format!("id_b . {ab}"));
    }

    #[test]
    fn product_counts() {
        assert_eq!(product_cat(vec![]).objects().len(), 1);
        assert_eq!(product_cat(vec![]).morphisms().len(), 1);
        let a: CatRef = Arc::new(chaotic(ids(&["x", "y"])));
        let b: CatRef = Arc::new(DiscreteCategory::new(ids(&["p", "q", "r"])));
        let single = product_cat(vec![a.clone()]);
        assert_eq!(single.morphisms().len(), a.morphisms().len());
        let p = product_cat(vec![a.clone(), b.clone()]);
        assert_eq!(p.morphisms().len(), a.morphisms().len() * b.morphisms().len());
        assert!(check_category(&p).passed());
    }

    #[test]
    fn functor_identity_and_composition() {
        let c: CatRef = Arc::new(chaotic(sigma(3)));
        let id: FunctorRef = Arc::new(identity_functor(c.clone()));
        let swap = FinFunctor::from_functor(id.as_ref()).unwrap();
        assert!(check_functor(&swap).passed());
        let composed = compose_functor(id.clone(), Arc::new(swap.clone())).unwrap();
        assert!(functor_equal(&composed, &swap));
    }

    #[test]
    fn nattrans_identity_and_endpoints() {
        let c: CatRef = Arc::new(chaotic(ids(&["a", "b"])));
        let id: FunctorRef = Arc::new(identity_functor(c.clone()));
        let t = FinNatTrans::identity(id.clone()).unwrap();
        assert!(check_nattrans(&t).passed());
        assert!(is_natural_iso(&t));
        let mut bad = HashMap::new();
        bad.insert(Id::name("a"), Id::arrow("a".into(), "a".into()));
        bad.insert(Id::name("b"), Id::arrow("a".into(), "b".into()));
        match FinNatTrans::new(id.clone(), id, bad) {
            Err(Error::Endpoint { object, .. }) => assert_eq!(object, "b"),
            other => panic!("expected endpoint error, got {:?}", other.err()),
        }
    }
}
