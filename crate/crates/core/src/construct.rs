//! Builders: the commutative, associative and Barratt-Eccles operads, the
//! endomorphism multicategory of a finite commutative monoid, weight operads,
//! and products.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::fincat::{product_cat, CatRef, ChaoticCategory, DiscreteCategory, MonoidCategory};
use crate::id::Id;
use crate::multicat::{check_sig, Level, MultiRef, Multicategory, Signature};
use crate::perm::Perm;

/// A multicategory with hom-sets: the input to the discrete and chaotic lifts.
pub trait SetMulticategory: Send + Sync {
    fn key(&self) -> String;
    fn arity_bound(&self) -> usize;
    fn objects(&self) -> &[Id];
    fn elements(&self, sig: &Signature) -> Result<Vec<Id>>;
    fn unit(&self, a: &Id) -> Result<Id>;
    fn act(&self, sig: &Signature, sigma: &Perm, x: &Id) -> Result<Id>;
    fn gamma(&self, outer: &Signature, inners: &[Signature], x: &Id, ys: &[Id]) -> Result<Id>;
}

pub type SetRef = Arc<dyn SetMulticategory>;

fn sig_ok(objects: &[Id], bound: usize, sig: &Signature) -> Result<()> {
    if sig.arity() > bound {
        return Err(Error::UnknownSignature(format!("{sig} exceeds arity bound {bound}")));
    }
    for a in sig.inputs.iter().chain([&sig.output]) {
        if !objects.contains(a) {
            return Err(Error::UnknownObject(a.to_string()));
        }
    }
    Ok(())
}

/// The commutative operad: one object, one operation of each arity.
pub struct Comm {
    bound: usize,
    objects: Vec<Id>,
}

impl Comm {
    pub fn new(bound: usize) -> Comm {
        Comm { bound, objects: vec![Id::star()] }
    }
}

impl SetMulticategory for Comm {
    fn key(&self) -> String {
        "comm".into()
    }

    fn arity_bound(&self) -> usize {
        self.bound
    }

    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn elements(&self, sig: &Signature) -> Result<Vec<Id>> {
        sig_ok(&self.objects, self.bound, sig)?;
        Ok(vec![Id::star()])
    }

    fn unit(&self, _: &Id) -> Result<Id> {
        Ok(Id::star())
    }

    fn act(&self, _: &Signature, _: &Perm, x: &Id) -> Result<Id> {
        Ok(x.clone())
    }

    fn gamma(&self, _: &Signature, _: &[Signature], _: &Id, _: &[Id]) -> Result<Id> {
        Ok(Id::star())
    }
}

/// The associative operad: arity `n` operations are the elements of `S_n`,
/// acted on by right multiplication and composed by block permutations.
pub struct Ass {
    bound: usize,
    objects: Vec<Id>,
}

impl Ass {
    pub fn new(bound: usize) -> Ass {
        Ass { bound, objects: vec![Id::star()] }
    }
}

impl SetMulticategory for Ass {
    fn key(&self) -> String {
        "assoc".into()
    }

    fn arity_bound(&self) -> usize {
        self.bound
    }

    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn elements(&self, sig: &Signature) -> Result<Vec<Id>> {
        sig_ok(&self.objects, self.bound, sig)?;
        Ok(Perm::all(sig.arity()).into_iter().map(Id::Perm).collect())
    }

    fn unit(&self, _: &Id) -> Result<Id> {
        Ok(Id::Perm(Perm::identity(1)))
    }

    fn act(&self, _: &Signature, sigma: &Perm, x: &Id) -> Result<Id> {
        Ok(Id::Perm(x.expect_perm()?.compose(sigma)?))
    }

    fn gamma(&self, _: &Signature, _: &[Signature], x: &Id, ys: &[Id]) -> Result<Id> {
        let blocks = ys.iter().map(|y| y.expect_perm().cloned()).collect::<Result<Vec<_>>>()?;
        Ok(Id::Perm(x.expect_perm()?.block(&blocks)?))
    }
}

/// A finite commutative monoid given by its table.
#[derive(Clone)]
pub struct FinCommMonoid {
    name: String,
    elements: Vec<Id>,
    index: HashMap<Id, usize>,
    table: Vec<Vec<usize>>,
    unit: usize,
}

impl fmt::Debug for FinCommMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FinCommMonoid {
    /// Checks associativity, the unit laws and commutativity of the table.
    pub fn new(name: impl Into<String>, elements: Vec<Id>, table: Vec<Vec<usize>>, unit: usize) -> Result<FinCommMonoid> {
        let n = elements.len();
        let index: HashMap<Id, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != n || unit >= n || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidMonoid("table shape does not match the carrier".into()));
        }
        let e = |i: usize| elements[i].to_string();
        for a in 0..n {
            if table[unit][a] != a || table[a][unit] != a {
                return Err(Error::InvalidMonoid(format!("{} is not a unit for {}", e(unit), e(a))));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidMonoid(format!("not associative at ({}, {}, {})", e(a), e(b), e(c))));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if table[a][b] != table[b][a] {
                    return Err(Error::NotCommutative(format!("{} * {} != {} * {}", e(a), e(b), e(b), e(a))));
                }
            }
        }
        Ok(FinCommMonoid { name: name.into(), elements, index, table, unit })
    }

    /// The cyclic group `Z/k` on the names `0..k-1`.
    pub fn cyclic(k: usize) -> FinCommMonoid {
        assert!(k > 0, "Z/0 is not finite");
        let elements = (0..k).map(|i| Id::name(&i.to_string())).collect();
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        FinCommMonoid::new(format!("Z/{k}"), elements, table, 0).expect("Z/k is a commutative monoid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[Id] {
        &self.elements
    }

    pub fn unit(&self) -> &Id {
        &self.elements[self.unit]
    }

    fn idx(&self, a: &Id) -> Result<usize> {
        self.index.get(a).copied().ok_or_else(|| Error::UnknownObject(a.to_string()))
    }

    pub fn op(&self, a: &Id, b: &Id) -> Result<Id> {
        Ok(self.elements[self.table[self.idx(a)?][self.idx(b)?]].clone())
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a Id>) -> Result<Id> {
        let mut acc = self.unit;
        for x in xs {
            acc = self.table[acc][self.idx(x)?];
        }
        Ok(self.elements[acc].clone())
    }

    /// `x + .. + x`, `n` times.
    pub fn times(&self, n: usize, x: &Id) -> Result<Id> {
        self.sum(std::iter::repeat(x).take(n))
    }

    pub fn inverse(&self, a: &Id) -> Option<Id> {
        let i = self.idx(a).ok()?;
        (0..self.elements.len()).find(|&j| self.table[i][j] == self.unit).map(|j| self.elements[j].clone())
    }
}

/// `End(A)` for a discrete commutative monoid `A`: one multimorphism
/// `(a_1..a_n; b)` exactly when `a_1 + .. + a_n = b`.
pub struct EndMonoid {
    mon: FinCommMonoid,
    bound: usize,
}

impl SetMulticategory for EndMonoid {
    fn key(&self) -> String {
        format!("end({})", self.mon.name)
    }

    fn arity_bound(&self) -> usize {
        self.bound
    }

    fn objects(&self) -> &[Id] {
        self.mon.elements()
    }

    fn elements(&self, sig: &Signature) -> Result<Vec<Id>> {
        sig_ok(self.mon.elements(), self.bound, sig)?;
        Ok(if self.mon.sum(&sig.inputs)? == sig.output { vec![Id::star()] } else { vec![] })
    }

    fn unit(&self, _: &Id) -> Result<Id> {
        Ok(Id::star())
    }

    fn act(&self, _: &Signature, _: &Perm, x: &Id) -> Result<Id> {
        Ok(x.clone())
    }

    fn gamma(&self, _: &Signature, _: &[Signature], _: &Id, _: &[Id]) -> Result<Id> {
        Ok(Id::star())
    }
}

/// One object; every arity has the carrier of `A` as operations;
/// `gamma(a; b_1..b_n) = a + b_1 + .. + b_n`; trivial action; unit `0`.
pub struct Weight {
    mon: FinCommMonoid,
    bound: usize,
    objects: Vec<Id>,
}

impl Weight {
    pub fn new(mon: FinCommMonoid, bound: usize) -> Weight {
        Weight { mon, bound, objects: vec![Id::star()] }
    }

    pub fn monoid(&self) -> &FinCommMonoid {
        &self.mon
    }
}

impl SetMulticategory for Weight {
    fn key(&self) -> String {
        format!("weight({})", self.mon.name)
    }

    fn arity_bound(&self) -> usize {
        self.bound
    }

    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn elements(&self, sig: &Signature) -> Result<Vec<Id>> {
        sig_ok(&self.objects, self.bound, sig)?;
        Ok(self.mon.elements().to_vec())
    }

    fn unit(&self, _: &Id) -> Result<Id> {
        Ok(self.mon.unit().clone())
    }

    fn act(&self, _: &Signature, _: &Perm, x: &Id) -> Result<Id> {
        Ok(x.clone())
    }

    fn gamma(&self, _: &Signature, _: &[Signature], x: &Id, ys: &[Id]) -> Result<Id> {
        self.mon.sum(std::iter::once(x).chain(ys))
    }
}

/// Componentwise product of two Set-multicategories.
pub struct SetProduct {
    a: SetRef,
    b: SetRef,
    objects: Vec<Id>,
}

impl SetProduct {
    pub fn new(a: SetRef, b: SetRef) -> Result<SetProduct> {
        if a.arity_bound() != b.arity_bound() {
            return Err(Error::ArityBoundMismatch(a.arity_bound(), b.arity_bound()));
        }
        let objects = pairs(a.objects(), b.objects());
        Ok(SetProduct { a, b, objects })
    }
}

fn pairs(xs: &[Id], ys: &[Id]) -> Vec<Id> {
    xs.iter().flat_map(|x| ys.iter().map(move |y| Id::pair(x.clone(), y.clone()))).collect()
}

/// Splits a signature over pairs into its two coordinate signatures.
pub fn split_signature(sig: &Signature) -> Result<(Signature, Signature)> {
    let mut l = Vec::with_capacity(sig.arity());
    let mut r = Vec::with_capacity(sig.arity());
    for a in &sig.inputs {
        let (x, y) = a.expect_pair()?;
        l.push(x.clone());
        r.push(y.clone());
    }
    let (x, y) = sig.output.expect_pair()?;
    Ok((Signature::new(l, x.clone()), Signature::new(r, y.clone())))
}

/// Pairs up two signatures of equal arity.
pub fn pair_signature(l: &Signature, r: &Signature) -> Result<Signature> {
    if l.arity() != r.arity() {
        return Err(Error::DegreeMismatch { expected: l.arity(), found: r.arity() });
    }
    let inputs = l.inputs.iter().zip(&r.inputs).map(|(x, y)| Id::pair(x.clone(), y.clone())).collect();
    Ok(Signature::new(inputs, Id::pair(l.output.clone(), r.output.clone())))
}

fn split_all(sigs: &[Signature]) -> Result<(Vec<Signature>, Vec<Signature>)> {
    let mut l = Vec::with_capacity(sigs.len());
    let mut r = Vec::with_capacity(sigs.len());
    for s in sigs {
        let (x, y) = split_signature(s)?;
        l.push(x);
        r.push(y);
    }
    Ok((l, r))
}

fn split_ids(ids: &[Id]) -> Result<(Vec<Id>, Vec<Id>)> {
    let mut l = Vec::with_capacity(ids.len());
    let mut r = Vec::with_capacity(ids.len());
    for x in ids {
        let (a, b) = x.expect_pair()?;
        l.push(a.clone());
        r.push(b.clone());
    }
    Ok((l, r))
}

impl SetMulticategory for SetProduct {
    fn key(&self) -> String {
        format!("{}x{}", self.a.key(), self.b.key())
    }

    fn arity_bound(&self) -> usize {
        self.a.arity_bound()
    }

    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn elements(&self, sig: &Signature) -> Result<Vec<Id>> {
        let (l, r) = split_signature(sig)?;
        Ok(pairs(&self.a.elements(&l)?, &self.b.elements(&r)?))
    }

    fn unit(&self, a: &Id) -> Result<Id> {
        let (x, y) = a.expect_pair()?;
        Ok(Id::pair(self.a.unit(x)?, self.b.unit(y)?))
    }

    fn act(&self, sig: &Signature, sigma: &Perm, x: &Id) -> Result<Id> {
        let (l, r) = split_signature(sig)?;
        let (p, q) = x.expect_pair()?;
        Ok(Id::pair(self.a.act(&l, sigma, p)?, self.b.act(&r, sigma, q)?))
    }

    fn gamma(&self, outer: &Signature, inners: &[Signature], x: &Id, ys: &[Id]) -> Result<Id> {
        let (ol, or) = split_signature(outer)?;
        let (il, ir) = split_all(inners)?;
        let (p, q) = x.expect_pair()?;
        let (yl, yr) = split_ids(ys)?;
        Ok(Id::pair(self.a.gamma(&ol, &il, p, &yl)?, self.b.gamma(&or, &ir, q, &yr)?))
    }
}

/// How hom-sets become hom categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftKind {
    Discrete,
    Chaotic,
}

/// A Set-multicategory with each hom-set made into a discrete or chaotic
/// category. Arrows are `{x>y}`; the action and composition act on both ends.
pub struct Lifted {
    set: SetRef,
    kind: LiftKind,
    cache: RwLock<HashMap<Signature, CatRef>>,
}

impl Lifted {
    pub fn new(set: SetRef, kind: LiftKind) -> Lifted {
        Lifted { set, kind, cache: RwLock::new(HashMap::new()) }
    }

    pub fn set(&self) -> &SetRef {
        &self.set
    }

    fn ends<'a>(&self, x: &'a Id) -> Result<(&'a Id, &'a Id)> {
        x.expect_arrow()
    }
}

impl Multicategory for Lifted {
    fn key(&self) -> String {
        match self.kind {
            LiftKind::Discrete => format!("{}[{}]", self.set.key(), self.set.arity_bound()),
            LiftKind::Chaotic => format!("E({})[{}]", self.set.key(), self.set.arity_bound()),
        }
    }

    fn arity_bound(&self) -> usize {
        self.set.arity_bound()
    }

    fn objects(&self) -> &[Id] {
        self.set.objects()
    }

    fn hom(&self, sig: &Signature) -> Result<CatRef> {
        if let Some(h) = self.cache.read().unwrap().get(sig) {
            return Ok(h.clone());
        }
        check_sig(self, sig)?;
        let elems = self.set.elements(sig)?;
        let h: CatRef = match self.kind {
            LiftKind::Discrete => Arc::new(DiscreteCategory::new(elems)),
            LiftKind::Chaotic => Arc::new(ChaoticCategory::new(elems)),
        };
        self.cache.write().unwrap().insert(sig.clone(), h.clone());
        Ok(h)
    }

    fn unit(&self, a: &Id) -> Result<Id> {
        self.set.unit(a)
    }

    fn act(&self, sig: &Signature, sigma: &Perm, x: &Id, level: Level) -> Result<Id> {
        match level {
            Level::Obj => self.set.act(sig, sigma, x),
            Level::Mor => {
                let (s, t) = self.ends(x)?;
                Ok(Id::arrow(self.set.act(sig, sigma, s)?, self.set.act(sig, sigma, t)?))
            }
        }
    }

    fn gamma(&self, outer: &Signature, inners: &[Signature], x: &Id, ys: &[Id], level: Level) -> Result<Id> {
        match level {
            Level::Obj => self.set.gamma(outer, inners, x, ys),
            Level::Mor => {
                let (s, t) = self.ends(x)?;
                let (ss, ts) = ys.iter().map(|y| self.ends(y).map(|(a, b)| (a.clone(), b.clone()))).collect::<Result<(Vec<_>, Vec<_>)>>()?;
                Ok(Id::arrow(self.set.gamma(outer, inners, s, &ss)?, self.set.gamma(outer, inners, t, &ts)?))
            }
        }
    }
}

fn validate_set(sm: &dyn SetMulticategory) -> Result<()> {
    for a in sm.objects() {
        let u = sm.unit(a)?;
        if !sm.elements(&Signature::unary(a.clone()))?.contains(&u) {
            return Err(Error::InvalidSetMulticat(format!("unit {u} of {a} is not an operation of ({a};{a})")));
        }
    }
    Ok(())
}

pub fn discrete_lift(sm: SetRef) -> Result<MultiRef> {
    validate_set(sm.as_ref())?;
    Ok(Arc::new(Lifted::new(sm, LiftKind::Discrete)))
}

/// The chaotic lift `E`: a unique arrow between any two operations.
#[allow(non_snake_case)]
pub fn chaotic_E(sm: SetRef) -> Result<MultiRef> {
    validate_set(sm.as_ref())?;
    Ok(Arc::new(Lifted::new(sm, LiftKind::Chaotic)))
}

pub fn terminal_operad(n: usize) -> MultiRef {
    chaotic_E(Arc::new(Comm::new(n))).unwrap()
}

pub fn assoc_operad(n: usize) -> MultiRef {
    discrete_lift(Arc::new(Ass::new(n))).unwrap()
}

/// The Barratt-Eccles operad: arity `n` is the chaotic category on `S_n`,
/// with `E_s^t` written `{s>t}`.
pub fn barratt_eccles(n: usize) -> MultiRef {
    chaotic_E(Arc::new(Ass::new(n))).unwrap()
}

pub fn is_barratt_eccles(m: &dyn Multicategory) -> bool {
    m.key() == barratt_eccles(m.arity_bound()).key()
}

pub fn end_of_monoid(mon: FinCommMonoid, n: usize) -> Result<MultiRef> {
    discrete_lift(Arc::new(EndMonoid { mon, bound: n }))
}

/// Builds `End` from a raw table, rejecting non-commutative ones.
pub fn end_of_table(name: &str, elements: Vec<Id>, table: Vec<Vec<usize>>, unit: usize, n: usize) -> Result<MultiRef> {
    end_of_monoid(FinCommMonoid::new(name, elements, table, unit)?, n)
}

pub fn weight_operad(mon: FinCommMonoid, n: usize) -> MultiRef {
    discrete_lift(Arc::new(Weight::new(mon, n))).unwrap()
}

pub fn weight_operad_chaotic(mon: FinCommMonoid, n: usize) -> MultiRef {
    chaotic_E(Arc::new(Weight::new(mon, n))).unwrap()
}

/// One object; each hom is the one-object category on the monoid `A`;
/// every 1-cell is `*`; 2-cells compose by `a + b_1 + .. + b_n`.
pub struct Delooping {
    mon: FinCommMonoid,
    bound: usize,
    objects: Vec<Id>,
    hom: CatRef,
}

pub fn delooping_operad(mon: FinCommMonoid, n: usize) -> MultiRef {
    let m2 = mon.clone();
    let hom: CatRef =
        Arc::new(MonoidCategory::new(mon.elements().to_vec(), mon.unit().clone(), Arc::new(move |a, b| m2.op(a, b))));
    Arc::new(Delooping { mon, bound: n, objects: vec![Id::star()], hom })
}

impl Multicategory for Delooping {
    fn key(&self) -> String {
        format!("B({})[{}]", self.mon.name(), self.bound)
    }

    fn arity_bound(&self) -> usize {
        self.bound
    }

    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn hom(&self, sig: &Signature) -> Result<CatRef> {
        check_sig(self, sig)?;
        Ok(self.hom.clone())
    }

    fn unit(&self, _: &Id) -> Result<Id> {
        Ok(Id::star())
    }

    fn act(&self, _: &Signature, _: &Perm, x: &Id, _: Level) -> Result<Id> {
        Ok(x.clone())
    }

    fn gamma(&self, _: &Signature, _: &[Signature], x: &Id, ys: &[Id], level: Level) -> Result<Id> {
        match level {
            Level::Obj => Ok(Id::star()),
            Level::Mor => self.mon.sum(std::iter::once(x).chain(ys)),
        }
    }
}

/// `M x N`: pairs of objects, products of hom categories, everything else
/// componentwise.
pub struct ProductMulticategory {
    a: MultiRef,
    b: MultiRef,
    objects: Vec<Id>,
    cache: RwLock<HashMap<Signature, CatRef>>,
}

pub fn product_multicat(a: MultiRef, b: MultiRef) -> Result<MultiRef> {
    if a.arity_bound() != b.arity_bound() {
        return Err(Error::ArityBoundMismatch(a.arity_bound(), b.arity_bound()));
    }
    let objects = pairs(a.objects(), b.objects());
    Ok(Arc::new(ProductMulticategory { a, b, objects, cache: RwLock::new(HashMap::new()) }))
}

impl Multicategory for ProductMulticategory {
    fn key(&self) -> String {
        format!("({} x {})", self.a.key(), self.b.key())
    }

    fn arity_bound(&self) -> usize {
        self.a.arity_bound()
    }

    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn hom(&self, sig: &Signature) -> Result<CatRef> {
        if let Some(h) = self.cache.read().unwrap().get(sig) {
            return Ok(h.clone());
        }
        check_sig(self, sig)?;
        let (l, r) = split_signature(sig)?;
        let h: CatRef = Arc::new(product_cat(vec![self.a.hom(&l)?, self.b.hom(&r)?]));
        self.cache.write().unwrap().insert(sig.clone(), h.clone());
        Ok(h)
    }

    fn unit(&self, a: &Id) -> Result<Id> {
        let (x, y) = a.expect_pair()?;
        Ok(Id::pair(self.a.unit(x)?, self.b.unit(y)?))
    }

    fn act(&self, sig: &Signature, sigma: &Perm, x: &Id, level: Level) -> Result<Id> {
        let (l, r) = split_signature(sig)?;
        let (p, q) = x.expect_pair()?;
        Ok(Id::pair(self.a.act(&l, sigma, p, level)?, self.b.act(&r, sigma, q, level)?))
    }

    fn gamma(&self, outer: &Signature, inners: &[Signature], x: &Id, ys: &[Id], level: Level) -> Result<Id> {
        let (ol, or) = split_signature(outer)?;
        let (il, ir) = split_all(inners)?;
        let (p, q) = x.expect_pair()?;
        let (yl, yr) = split_ids(ys)?;
        Ok(Id::pair(self.a.gamma(&ol, &il, p, &yl, level)?, self.b.gamma(&or, &ir, q, &yr, level)?))
    }

    fn factors(&self) -> Option<(MultiRef, MultiRef)> {
        Some((self.a.clone(), self.b.clone()))
    }

    fn is_formula(&self) -> bool {
        self.a.is_formula() && self.b.is_formula()
    }

    fn nonempty_signatures(&self, arity: usize) -> Result<Vec<Signature>> {
        let ls = self.a.nonempty_signatures(arity)?;
        let rs = self.b.nonempty_signatures(arity)?;
        let mut out = Vec::with_capacity(ls.len() * rs.len());
        for l in &ls {
            for r in &rs {
                out.push(pair_signature(l, r)?);
            }
        }
        Ok(out)
    }
}
