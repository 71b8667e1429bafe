//! Cat-enriched multicategories with a hard arity bound, and one checker per
//! axiom family.
//!
//! A 1-cell of `M(a_1..a_n; b)` is an object of the hom category, a 2-cell is
//! a morphism of it. Every evaluation takes a [`Level`] saying which one is
//! meant.
//!
//! Checkers enumerate every instance whose intermediate arities stay within
//! the bound. A pass is therefore a certificate for the bounded truncation
//! only. 2-cell instances are skipped when the hom category holding both
//! sides is thin: there the two sides are parallel arrows (both evaluations
//! are functors and agree on objects), hence equal.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{check_category, check_functor, for_each_tuple, product_cat, CatRef, Category, FinCat, Functor};
use crate::id::Id;
use crate::perm::Perm;
use crate::report::{AxiomCheck, Failure, Report};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub inputs: Vec<Id>,
    pub output: Id,
}

impl Signature {
    pub fn new(inputs: Vec<Id>, output: Id) -> Signature {
        Signature { inputs, output }
    }

    pub fn unary(a: Id) -> Signature {
        Signature { inputs: vec![a.clone()], output: a }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// `(<a> sigma; b)`.
    pub fn act(&self, sigma: &Perm) -> Result<Signature> {
        Ok(Signature { inputs: sigma.act_on_list(&self.inputs)?, output: self.output.clone() })
    }

    /// The signature of `gamma(f; g_1..g_n)`.
    pub fn compose(outer: &Signature, inners: &[Signature]) -> Result<Signature> {
        if inners.len() != outer.arity() {
            return Err(Error::DegreeMismatch { expected: outer.arity(), found: inners.len() });
        }
        let mut inputs = Vec::new();
        for (g, b) in inners.iter().zip(&outer.inputs) {
            if &g.output != b {
                return Err(Error::ShapeMismatch(format!("inner output {} does not match input {b} of {outer}", g.output)));
            }
            inputs.extend(g.inputs.iter().cloned());
        }
        Ok(Signature { inputs, output: outer.output.clone() })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, a) in self.inputs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ";{})", self.output)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn show_sigs(sigs: &[Signature]) -> String {
    sigs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub(crate) fn show_ids(ids: &[Id]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Which layer of a hom category an id belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// 1-cells, the objects of a hom category.
    Obj,
    /// 2-cells, the morphisms of a hom category.
    Mor,
}

impl Level {
    pub fn ids(self, c: &dyn Category) -> &[Id] {
        match self {
            Level::Obj => c.objects(),
            Level::Mor => c.morphisms(),
        }
    }

    pub fn contains(self, c: &dyn Category, x: &Id) -> bool {
        match self {
            Level::Obj => c.has_object(x),
            Level::Mor => c.has_morphism(x),
        }
    }
}

pub type MultiRef = Arc<dyn Multicategory>;

pub trait Multicategory: Send + Sync {
    /// Structural name; two multicategories with the same key are the same.
    fn key(&self) -> String;
    fn arity_bound(&self) -> usize;
    fn objects(&self) -> &[Id];
    /// The hom category; empty for signatures without multimorphisms.
    fn hom(&self, sig: &Signature) -> Result<CatRef>;
    fn unit(&self, a: &Id) -> Result<Id>;
    /// Right action of `sigma` on a 1-cell or 2-cell of `hom(sig)`.
    fn act(&self, sig: &Signature, sigma: &Perm, x: &Id, level: Level) -> Result<Id>;
    /// `gamma(x; ys)` for `x` in `hom(outer)` and `ys[j]` in `hom(inners[j])`.
    fn gamma(&self, outer: &Signature, inners: &[Signature], x: &Id, ys: &[Id], level: Level) -> Result<Id>;

    /// The two factors, for products built by [`crate::construct::product_multicat`].
    fn factors(&self) -> Option<(MultiRef, MultiRef)> {
        None
    }

    fn is_formula(&self) -> bool {
        true
    }

    /// Signatures of the given arity whose hom category is nonempty.
    fn nonempty_signatures(&self, arity: usize) -> Result<Vec<Signature>> {
        let objs = self.objects();
        let lists = vec![objs; arity + 1];
        let mut sigs = Vec::new();
        for_each_tuple(&lists, |t| sigs.push(Signature::new(t[..arity].to_vec(), t[arity].clone())));
        let mut out = Vec::new();
        for s in sigs {
            if !self.hom(&s)?.is_empty() {
                out.push(s);
            }
        }
        Ok(out)
    }
}

pub(crate) fn check_sig(m: &dyn Multicategory, sig: &Signature) -> Result<()> {
    if sig.arity() > m.arity_bound() {
        return Err(Error::UnknownSignature(format!("{sig} exceeds arity bound {}", m.arity_bound())));
    }
    for a in sig.inputs.iter().chain([&sig.output]) {
        if !m.objects().contains(a) {
            return Err(Error::UnknownObject(a.to_string()));
        }
    }
    Ok(())
}

/// Same structural key, or the same allocation.
pub fn same_multicat(a: &MultiRef, b: &MultiRef) -> bool {
    Arc::ptr_eq(a, b) || a.key() == b.key()
}

/// Validated `gamma`.
pub fn gamma_eval(
    m: &dyn Multicategory,
    outer: &Signature,
    inners: &[Signature],
    x: &Id,
    ys: &[Id],
    level: Level,
) -> Result<Id> {
    let total = Signature::compose(outer, inners)?;
    if ys.len() != inners.len() {
        return Err(Error::DegreeMismatch { expected: inners.len(), found: ys.len() });
    }
    for s in inners.iter().chain([outer, &total]) {
        check_sig(m, s)?;
    }
    let missing = |x: &Id, s: &Signature| Error::InvalidInput(format!("{x} is not a cell of {s}"));
    if !level.contains(m.hom(outer)?.as_ref(), x) {
        return Err(missing(x, outer));
    }
    for (y, s) in ys.iter().zip(inners) {
        if !level.contains(m.hom(s)?.as_ref(), y) {
            return Err(missing(y, s));
        }
    }
    m.gamma(outer, inners, x, ys, level)
}

/// Validated action.
pub fn act_eval(m: &dyn Multicategory, sig: &Signature, sigma: &Perm, x: &Id, level: Level) -> Result<Id> {
    check_sig(m, sig)?;
    if sigma.degree() != sig.arity() {
        return Err(Error::DegreeMismatch { expected: sig.arity(), found: sigma.degree() });
    }
    if !level.contains(m.hom(sig)?.as_ref(), x) {
        return Err(Error::InvalidInput(format!("{x} is not a cell of {sig}")));
    }
    m.act(sig, sigma, x, level)
}

/// Nonempty signatures of a multicategory, indexed by output.
pub struct SignatureIndex {
    pub all: Vec<(Signature, CatRef)>,
    by_output: HashMap<Id, Vec<usize>>,
}

impl SignatureIndex {
    pub fn new(m: &dyn Multicategory) -> Result<SignatureIndex> {
        let mut all = Vec::new();
        for n in 0..=m.arity_bound() {
            for s in m.nonempty_signatures(n)? {
                let h = m.hom(&s)?;
                all.push((s, h));
            }
        }
        all.sort_by(|a, b| a.0.cmp(&b.0));
        let mut by_output: HashMap<Id, Vec<usize>> = HashMap::new();
        for (i, (s, _)) in all.iter().enumerate() {
            by_output.entry(s.output.clone()).or_default().push(i);
        }
        Ok(SignatureIndex { all, by_output })
    }

    pub fn sig(&self, i: usize) -> &Signature {
        &self.all[i].0
    }

    pub fn hom(&self, i: usize) -> &CatRef {
        &self.all[i].1
    }

    /// Every way to pick one nonempty signature per input of `sig`, with
    /// total arity at most `budget`. Returned as indices into `all`.
    pub fn inner_choices(&self, sig: &Signature, budget: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(sig.arity());
        self.extend(sig, 0, budget, &mut cur, &mut out);
        out
    }

    fn extend(&self, sig: &Signature, j: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == sig.arity() {
            out.push(cur.clone());
            return;
        }
        for &i in self.by_output.get(&sig.inputs[j]).into_iter().flatten() {
            let k = self.all[i].0.arity();
            if k <= budget {
                cur.push(i);
                self.extend(sig, j + 1, budget - k, cur, out);
                cur.pop();
            }
        }
    }
}

fn levels_for(c: &dyn Category) -> &'static [Level] {
    if c.is_thin() {
        &[Level::Obj]
    } else {
        &[Level::Obj, Level::Mor]
    }
}

fn par_reports<T: Sync>(items: &[T], subject: &str, f: impl Fn(&T, &mut Report) + Sync + Send) -> Report {
    let parts: Vec<Report> = items
        .par_iter()
        .map(|it| {
            let mut r = Report::new(subject);
            f(it, &mut r);
            r
        })
        .collect();
    let mut r = Report::new(subject);
    for p in parts {
        r.merge(p);
    }
    r
}

/// `act(tau) . act(sigma) = act(sigma tau)`, `act(id) = id`, and each
/// `act(sigma)` is inverted by `act(sigma^-1)`.
pub fn check_sym_action(m: &dyn Multicategory) -> Report {
    let idx = match SignatureIndex::new(m) {
        Ok(i) => i,
        Err(e) => return error_report(m, "symmetric-action", e),
    };
    check_sym_action_with(m, &idx)
}

fn check_sym_action_with(m: &dyn Multicategory, idx: &SignatureIndex) -> Report {
    let mut r = par_reports(&idx.all, &m.key(), |(sig, hom), r| {
        let perms = Perm::all(sig.arity());
        for level in [Level::Obj, Level::Mor] {
            let xs = level.ids(hom.as_ref());
            let id = Perm::identity(sig.arity());
            let ident = r.axiom("action-identity");
            for x in xs {
                ident.compare(m.act(sig, &id, x, level), Ok(x.clone()), || format!("{sig} {x}"));
            }
            for s in &perms {
                let Ok(sig_s) = sig.act(s) else { continue };
                let inv = s.inverse();
                let inverse = r.axiom("action-invertibility");
                for x in xs {
                    let back = m.act(sig, s, x, level).and_then(|y| m.act(&sig_s, &inv, &y, level));
                    inverse.compare(back, Ok(x.clone()), || format!("{sig} sigma={s} {x}"));
                }
                let law = r.axiom("symmetric-action");
                for t in &perms {
                    let st = s.compose(t).unwrap();
                    for x in xs {
                        let lhs = m.act(sig, s, x, level).and_then(|y| m.act(&sig_s, t, &y, level));
                        let rhs = m.act(sig, &st, x, level);
                        law.compare(lhs, rhs, || format!("{sig} sigma={s} tau={t} {x}"));
                    }
                }
            }
        }
    });
    r.subject = m.key();
    r
}

struct OneLevel {
    outer: usize,
    inners: Vec<usize>,
}

fn one_level_shapes(m: &dyn Multicategory, idx: &SignatureIndex) -> Vec<OneLevel> {
    let mut out = Vec::new();
    for (i, (sig, _)) in idx.all.iter().enumerate() {
        for inners in idx.inner_choices(sig, m.arity_bound()) {
            out.push(OneLevel { outer: i, inners });
        }
    }
    out
}

/// Both evaluation orders of a doubly nested composite agree.
pub fn check_associativity(m: &dyn Multicategory) -> Report {
    let idx = match SignatureIndex::new(m) {
        Ok(i) => i,
        Err(e) => return error_report(m, "associativity", e),
    };
    check_associativity_with(m, &idx)
}

fn check_associativity_with(m: &dyn Multicategory, idx: &SignatureIndex) -> Report {
    let shapes = one_level_shapes(m, idx);
    let bound = m.arity_bound();
    let mut r = par_reports(&shapes, "", |sh, r| {
        let outer = idx.sig(sh.outer);
        let inners: Vec<Signature> = sh.inners.iter().map(|&i| idx.sig(i).clone()).collect();
        let Ok(mid) = Signature::compose(outer, &inners) else { return };
        for hs_idx in idx.inner_choices(&mid, bound) {
            let hs: Vec<Signature> = hs_idx.iter().map(|&i| idx.sig(i).clone()).collect();
            let Ok(fin) = Signature::compose(&mid, &hs) else { continue };
            let Ok(fin_hom) = m.hom(&fin) else { continue };
            // Split the innermost signatures by the inner they feed.
            let mut groups = Vec::new();
            let mut off = 0;
            for g in &inners {
                groups.push(hs[off..off + g.arity()].to_vec());
                off += g.arity();
            }
            let regrouped: Vec<Signature> =
                inners.iter().zip(&groups).map(|(g, h)| Signature::compose(g, h).unwrap()).collect();
            let mut cats: Vec<&CatRef> = vec![idx.hom(sh.outer)];
            cats.extend(sh.inners.iter().map(|&i| idx.hom(i)));
            cats.extend(hs_idx.iter().map(|&i| idx.hom(i)));
            let n = inners.len();
            let check = r.axiom("associativity");
            for &level in levels_for(fin_hom.as_ref()) {
                let lists: Vec<&[Id]> = cats.iter().map(|c| level.ids(c.as_ref())).collect();
                for_each_tuple(&lists, |t| {
                    let (f, g, h) = (&t[0], &t[1..=n], &t[n + 1..]);
                    let lhs = m.gamma(outer, &inners, f, g, level).and_then(|fg| m.gamma(&mid, &hs, &fg, h, level));
                    let rhs = (|| {
                        let mut gh = Vec::with_capacity(n);
                        let mut off = 0;
                        for (j, gj) in g.iter().enumerate() {
                            let k = inners[j].arity();
                            gh.push(m.gamma(&inners[j], &groups[j], gj, &h[off..off + k], level)?);
                            off += k;
                        }
                        m.gamma(outer, &regrouped, f, &gh, level)
                    })();
                    check.compare(lhs, rhs, || {
                        format!(
                            "outer {outer} inners [{}] innermost [{}] at ({f}; {}; {})",
                            show_sigs(&inners),
                            show_sigs(&hs),
                            show_ids(g),
                            show_ids(h)
                        )
                    });
                });
            }
        }
    });
    r.subject = m.key();
    r
}

/// `gamma(f; 1, .., 1) = f` and `gamma(1; f) = f` on 1-cells and 2-cells.
pub fn check_unity(m: &dyn Multicategory) -> Report {
    let idx = match SignatureIndex::new(m) {
        Ok(i) => i,
        Err(e) => return error_report(m, "unity", e),
    };
    check_unity_with(m, &idx)
}

fn check_unity_with(m: &dyn Multicategory, idx: &SignatureIndex) -> Report {
    let unit_cell = |a: &Id, level: Level| -> Result<Id> {
        let u = m.unit(a)?;
        match level {
            Level::Obj => Ok(u),
            Level::Mor => m.hom(&Signature::unary(a.clone()))?.identity(&u),
        }
    };
    let mut r = par_reports(&idx.all, "", |(sig, hom), r| {
        let unit_sigs: Vec<Signature> = sig.inputs.iter().map(|a| Signature::unary(a.clone())).collect();
        let out_sig = Signature::unary(sig.output.clone());
        for level in [Level::Obj, Level::Mor] {
            let units: Result<Vec<Id>> = sig.inputs.iter().map(|a| unit_cell(a, level)).collect();
            let out_unit = unit_cell(&sig.output, level);
            for x in level.ids(hom.as_ref()) {
                let rhs = units.clone().and_then(|u| m.gamma(sig, &unit_sigs, x, &u, level));
                r.axiom("right-unity").compare(rhs, Ok(x.clone()), || format!("{sig} {x}"));
                let lhs = out_unit.clone().and_then(|u| m.gamma(&out_sig, std::slice::from_ref(sig), &u, std::slice::from_ref(x), level));
                r.axiom("left-unity").compare(lhs, Ok(x.clone()), || format!("{sig} {x}"));
            }
        }
    });
    r.subject = m.key();
    r
}

/// `gamma(f sigma; g_sigma(1)..g_sigma(n)) = gamma(f; g) sigma<id_{k_sigma(j)}>`.
pub fn check_top_equivariance(m: &dyn Multicategory) -> Report {
    let idx = match SignatureIndex::new(m) {
        Ok(i) => i,
        Err(e) => return error_report(m, "top-equivariance", e),
    };
    check_top_with(m, &idx)
}

fn check_top_with(m: &dyn Multicategory, idx: &SignatureIndex) -> Report {
    let shapes = one_level_shapes(m, idx);
    let mut r = par_reports(&shapes, "", |sh, r| {
        let outer = idx.sig(sh.outer);
        let inners: Vec<Signature> = sh.inners.iter().map(|&i| idx.sig(i).clone()).collect();
        let Ok(mid) = Signature::compose(outer, &inners) else { return };
        let Ok(mid_hom) = m.hom(&mid) else { return };
        let n = inners.len();
        let mut cats: Vec<&CatRef> = vec![idx.hom(sh.outer)];
        cats.extend(sh.inners.iter().map(|&i| idx.hom(i)));
        let check = r.axiom("top-equivariance");
        for sigma in Perm::all(n) {
            let outer_s = outer.act(&sigma).unwrap();
            let inners_s = sigma.act_on_list(&inners).unwrap();
            let ids: Vec<Perm> = inners_s.iter().map(|g| Perm::identity(g.arity())).collect();
            let big = sigma.block(&ids).unwrap();
            for &level in levels_for(mid_hom.as_ref()) {
                let lists: Vec<&[Id]> = cats.iter().map(|c| level.ids(c.as_ref())).collect();
                for_each_tuple(&lists, |t| {
                    let (f, g) = (&t[0], &t[1..]);
                    let lhs = m
                        .act(outer, &sigma, f, level)
                        .and_then(|fs| m.gamma(&outer_s, &inners_s, &fs, &sigma.act_on_list(g).unwrap(), level));
                    let rhs = m.gamma(outer, &inners, f, g, level).and_then(|fg| m.act(&mid, &big, &fg, level));
                    check.compare(lhs, rhs, || {
                        format!("outer {outer} inners [{}] sigma={sigma} at ({f}; {})", show_sigs(&inners), show_ids(g))
                    });
                });
            }
        }
    });
    r.subject = m.key();
    r
}

/// `gamma(f; g_1 tau_1..g_n tau_n) = gamma(f; g) id<tau_1..tau_n>`.
pub fn check_bottom_equivariance(m: &dyn Multicategory) -> Report {
    let idx = match SignatureIndex::new(m) {
        Ok(i) => i,
        Err(e) => return error_report(m, "bottom-equivariance", e),
    };
    check_bottom_with(m, &idx)
}

pub(crate) fn perm_tuples(degrees: &[usize]) -> Vec<Vec<Perm>> {
    let mut out = vec![Vec::new()];
    for &k in degrees {
        let all = Perm::all(k);
        out = out
            .into_iter()
            .flat_map(|v| {
                all.iter().map(move |p| {
                    let mut w = v.clone();
                    w.push(p.clone());
                    w
                })
            })
            .collect();
    }
    out
}

fn check_bottom_with(m: &dyn Multicategory, idx: &SignatureIndex) -> Report {
    let shapes = one_level_shapes(m, idx);
    let mut r = par_reports(&shapes, "", |sh, r| {
        let outer = idx.sig(sh.outer);
        let inners: Vec<Signature> = sh.inners.iter().map(|&i| idx.sig(i).clone()).collect();
        let Ok(mid) = Signature::compose(outer, &inners) else { return };
        let Ok(mid_hom) = m.hom(&mid) else { return };
        let n = inners.len();
        let mut cats: Vec<&CatRef> = vec![idx.hom(sh.outer)];
        cats.extend(sh.inners.iter().map(|&i| idx.hom(i)));
        let degrees: Vec<usize> = inners.iter().map(Signature::arity).collect();
        let check = r.axiom("bottom-equivariance");
        for taus in perm_tuples(&degrees) {
            let inners_t: Vec<Signature> = inners.iter().zip(&taus).map(|(g, t)| g.act(t).unwrap()).collect();
            let big = Perm::identity(n).block(&taus).unwrap();
            for &level in levels_for(mid_hom.as_ref()) {
                let lists: Vec<&[Id]> = cats.iter().map(|c| level.ids(c.as_ref())).collect();
                for_each_tuple(&lists, |t| {
                    let (f, g) = (&t[0], &t[1..]);
                    let lhs = (|| {
                        let gt = g
                            .iter()
                            .zip(inners.iter().zip(&taus))
                            .map(|(x, (s, tau))| m.act(s, tau, x, level))
                            .collect::<Result<Vec<_>>>()?;
                        m.gamma(outer, &inners_t, f, &gt, level)
                    })();
                    let rhs = m.gamma(outer, &inners, f, g, level).and_then(|fg| m.act(&mid, &big, &fg, level));
                    check.compare(lhs, rhs, || {
                        let ts: Vec<String> = taus.iter().map(ToString::to_string).collect();
                        format!("outer {outer} inners [{}] taus=[{}] at ({f}; {})", show_sigs(&inners), ts.join(" "), show_ids(g))
                    });
                });
            }
        }
    });
    r.subject = m.key();
    r
}

fn error_report(m: &dyn Multicategory, axiom: &str, e: Error) -> Report {
    let mut r = Report::new(m.key());
    r.axiom(axiom).fail("index".into(), e.to_string());
    r
}

/// The action of `sigma` on `hom(sig)` as a functor.
pub struct ActionFunctor<'a> {
    m: &'a dyn Multicategory,
    sig: Signature,
    sigma: Perm,
    source: CatRef,
    target: CatRef,
}

impl<'a> ActionFunctor<'a> {
    pub fn new(m: &'a dyn Multicategory, sig: Signature, sigma: Perm) -> Result<ActionFunctor<'a>> {
        let source = m.hom(&sig)?;
        let target = m.hom(&sig.act(&sigma)?)?;
        Ok(ActionFunctor { m, sig, sigma, source, target })
    }
}

impl Functor for ActionFunctor<'_> {
    fn source(&self) -> &CatRef {
        &self.source
    }

    fn target(&self) -> &CatRef {
        &self.target
    }

    fn on_object(&self, a: &Id) -> Result<Id> {
        self.m.act(&self.sig, &self.sigma, a, Level::Obj)
    }

    fn on_morphism(&self, x: &Id) -> Result<Id> {
        self.m.act(&self.sig, &self.sigma, x, Level::Mor)
    }
}

/// `gamma` at one shape as a functor out of the product of hom categories.
pub struct GammaFunctor<'a> {
    m: &'a dyn Multicategory,
    outer: Signature,
    inners: Vec<Signature>,
    source: CatRef,
    target: CatRef,
}

impl<'a> GammaFunctor<'a> {
    pub fn new(m: &'a dyn Multicategory, outer: Signature, inners: Vec<Signature>) -> Result<GammaFunctor<'a>> {
        let target = m.hom(&Signature::compose(&outer, &inners)?)?;
        let mut factors = vec![m.hom(&outer)?];
        for g in &inners {
            factors.push(m.hom(g)?);
        }
        Ok(GammaFunctor { m, outer, inners, source: Arc::new(product_cat(factors)), target })
    }

    fn eval(&self, x: &Id, level: Level) -> Result<Id> {
        let parts = x.as_tuple().ok_or_else(|| Error::InvalidInput(format!("{x} is not a tuple")))?;
        self.m.gamma(&self.outer, &self.inners, &parts[0], &parts[1..], level)
    }
}

impl Functor for GammaFunctor<'_> {
    fn source(&self) -> &CatRef {
        &self.source
    }

    fn target(&self) -> &CatRef {
        &self.target
    }

    fn on_object(&self, a: &Id) -> Result<Id> {
        self.eval(a, Level::Obj)
    }

    fn on_morphism(&self, x: &Id) -> Result<Id> {
        self.eval(x, Level::Mor)
    }
}

/// Units and evaluations land where they should; table-backed hom
/// categories, actions and compositions satisfy the category and functor
/// laws. Formula-backed structure is well typed by construction and only
/// its 1-cell typing is re-checked.
pub fn check_structure(m: &dyn Multicategory, idx: &SignatureIndex) -> Report {
    let mut r = Report::new(m.key());
    for (sig, hom) in &idx.all {
        if !hom.is_formula() {
            let rep = check_category(hom.as_ref());
            for c in rep.checks {
                let mut c = c;
                for f in &mut c.failures {
                    f.witness = format!("{sig} {}", f.witness);
                }
                c.axiom = format!("hom-category/{}", c.axiom);
                r.push(c);
            }
        }
    }
    let units = r.axiom("unit-typing");
    for a in m.objects() {
        let ok = m.unit(a).and_then(|u| Ok(m.hom(&Signature::unary(a.clone()))?.has_object(&u)));
        match ok {
            Ok(b) => units.record(b, || a.to_string(), || "unit is not a 1-cell of (a;a)".into()),
            Err(e) => units.record(false, || a.to_string(), || e.to_string()),
        }
    }
    let shapes = one_level_shapes(m, idx);
    let formula = m.is_formula();
    let typing = par_reports(&shapes, "", |sh, r| {
        let outer = idx.sig(sh.outer);
        let inners: Vec<Signature> = sh.inners.iter().map(|&i| idx.sig(i).clone()).collect();
        let Ok(mid) = Signature::compose(outer, &inners) else { return };
        let mid_hom = match m.hom(&mid) {
            Ok(h) => h,
            Err(e) => return r.axiom("gamma-typing").fail(mid.to_string(), e.to_string()),
        };
        let mut cats: Vec<&CatRef> = vec![idx.hom(sh.outer)];
        cats.extend(sh.inners.iter().map(|&i| idx.hom(i)));
        let check = r.axiom("gamma-typing");
        let levels: &[Level] = if formula { &[Level::Obj] } else { &[Level::Obj, Level::Mor] };
        for &level in levels {
            let lists: Vec<&[Id]> = cats.iter().map(|c| level.ids(c.as_ref())).collect();
            for_each_tuple(&lists, |t| match m.gamma(outer, &inners, &t[0], &t[1..], level) {
                Ok(v) => check.record(level.contains(mid_hom.as_ref(), &v), || format!("{outer} [{}] at {}", show_sigs(&inners), show_ids(t)), || format!("{v} is not a cell of {mid}")),
                Err(e) => check.record(false, || format!("{outer} [{}] at {}", show_sigs(&inners), show_ids(t)), || e.to_string()),
            });
        }
        if !formula {
            match GammaFunctor::new(m, outer.clone(), inners.clone()) {
                Ok(g) => prefixed(r, "gamma-functoriality", &format!("{outer} [{}]", show_sigs(&inners)), check_functor(&g)),
                Err(e) => r.axiom("gamma-functoriality").fail(outer.to_string(), e.to_string()),
            }
        }
    });
    r.merge(typing);
    let actions = par_reports(&idx.all, "", |(sig, hom), r| {
        for sigma in Perm::all(sig.arity()) {
            let Ok(target_sig) = sig.act(&sigma) else { continue };
            let target = match m.hom(&target_sig) {
                Ok(h) => h,
                Err(e) => return r.axiom("action-typing").fail(target_sig.to_string(), e.to_string()),
            };
            let check = r.axiom("action-typing");
            for level in [Level::Obj, Level::Mor] {
                for x in level.ids(hom.as_ref()) {
                    match m.act(sig, &sigma, x, level) {
                        Ok(v) => check.record(level.contains(target.as_ref(), &v), || format!("{sig} sigma={sigma} {x}"), || format!("{v} is not a cell of {target_sig}")),
                        Err(e) => check.record(false, || format!("{sig} sigma={sigma} {x}"), || e.to_string()),
                    }
                }
            }
            if !formula {
                match ActionFunctor::new(m, sig.clone(), sigma.clone()) {
                    Ok(a) => prefixed(r, "action-functoriality", &format!("{sig} sigma={sigma}"), check_functor(&a)),
                    Err(e) => r.axiom("action-functoriality").fail(sig.to_string(), e.to_string()),
                }
            }
        }
    });
    r.merge(actions);
    r
}

fn prefixed(r: &mut Report, axiom: &str, witness: &str, sub: Report) {
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

/// Everything: typing, hom categories, the five axiom families.
pub fn check_multicat(m: &dyn Multicategory) -> Report {
    let idx = match SignatureIndex::new(m) {
        Ok(i) => i,
        Err(e) => return error_report(m, "signatures", e),
    };
    let mut r = check_structure(m, &idx);
    r.merge(check_sym_action_with(m, &idx));
    r.merge(check_unity_with(m, &idx));
    r.merge(check_associativity_with(m, &idx));
    r.merge(check_top_with(m, &idx));
    r.merge(check_bottom_with(m, &idx));
    r.subject = m.key();
    r
}

/// Like [`check_multicat`], but a product is checked through its factors.
/// Product composition and action are componentwise, so an axiom instance
/// of the product holds iff both of its projections hold. The product
/// itself is only checked for hom sizes and unit typing.
pub fn check_multicat_factored(m: &dyn Multicategory) -> Report {
    check_multicat_factored_with(m, &mut HashMap::new())
}

/// [`check_multicat_factored`] with leaf reports memoized by key.
pub fn check_multicat_factored_with(m: &dyn Multicategory, cache: &mut HashMap<String, Report>) -> Report {
    let Some((a, b)) = m.factors() else {
        return cache.entry(m.key()).or_insert_with(|| check_multicat(m)).clone();
    };
    let idx = match SignatureIndex::new(m) {
        Ok(i) => i,
        Err(e) => return error_report(m, "signatures", e),
    };
    let mut r = Report::new(m.key());
    let homs = r.axiom("product-homs");
    for (sig, hom) in &idx.all {
        let sizes = crate::construct::split_signature(sig).and_then(|(l, rt)| {
            let (x, y) = (a.hom(&l)?, b.hom(&rt)?);
            Ok((x.objects().len() * y.objects().len(), x.morphisms().len() * y.morphisms().len()))
        });
        match sizes {
            Ok(n) => homs.record(
                n == (hom.objects().len(), hom.morphisms().len()),
                || sig.to_string(),
                || "hom is not the product of the factor homs".into(),
            ),
            Err(e) => homs.record(false, || sig.to_string(), || e.to_string()),
        }
    }
    let units = r.axiom("unit-typing");
    for x in m.objects() {
        let ok = m.unit(x).and_then(|u| Ok(m.hom(&Signature::unary(x.clone()))?.has_object(&u)));
        match ok {
            Ok(ok) => units.record(ok, || x.to_string(), || "unit is not a 1-cell of (a;a)".into()),
            Err(e) => units.record(false, || x.to_string(), || e.to_string()),
        }
    }
    for (side, f) in [("left", a), ("right", b)] {
        for mut c in check_multicat_factored_with(f.as_ref(), cache).checks {
            for w in &mut c.failures {
                w.witness = format!("{side} {}: {}", f.key(), w.witness);
            }
            r.push(c);
        }
    }
    r.subject = m.key();
    r
}

/// Action and composition tables for one level.
#[derive(Debug, Clone, Default)]
pub struct LevelTables {
    pub obj: HashMap<Vec<Id>, Id>,
    pub mor: HashMap<Vec<Id>, Id>,
}

impl LevelTables {
    fn get(&self, level: Level) -> &HashMap<Vec<Id>, Id> {
        match level {
            Level::Obj => &self.obj,
            Level::Mor => &self.mor,
        }
    }

    pub fn get_mut(&mut self, level: Level) -> &mut HashMap<Vec<Id>, Id> {
        match level {
            Level::Obj => &mut self.obj,
            Level::Mor => &mut self.mor,
        }
    }
}

pub type ShapeKey = (Signature, Vec<Signature>);

/// A multicategory given by explicit tables. Signatures without an entry in
/// `homs` have an empty hom category.
#[derive(Clone)]
pub struct TableMulticategory {
    pub name: String,
    pub arity_bound: usize,
    pub objects: Vec<Id>,
    pub homs: BTreeMap<Signature, Arc<FinCat>>,
    pub units: BTreeMap<Id, Id>,
    pub actions: HashMap<(Signature, Perm), LevelTables>,
    pub gammas: HashMap<ShapeKey, LevelTables>,
    empty: CatRef,
}

impl TableMulticategory {
    pub fn new(name: impl Into<String>, arity_bound: usize, objects: Vec<Id>) -> TableMulticategory {
        let empty: CatRef = Arc::new(FinCat::new(vec![], vec![], vec![], vec![]).unwrap());
        TableMulticategory {
            name: name.into(),
            arity_bound,
            objects,
            homs: BTreeMap::new(),
            units: BTreeMap::new(),
            actions: HashMap::new(),
            gammas: HashMap::new(),
            empty,
        }
    }

    /// Tabulates every hom, unit, action and composite of `m`.
    pub fn materialize(m: &dyn Multicategory) -> Result<TableMulticategory> {
        let idx = SignatureIndex::new(m)?;
        let mut t = TableMulticategory::new(m.key(), m.arity_bound(), m.objects().to_vec());
        for (sig, hom) in &idx.all {
            t.homs.insert(sig.clone(), Arc::new(FinCat::from_category(hom.as_ref())?));
        }
        for a in m.objects() {
            t.units.insert(a.clone(), m.unit(a)?);
        }
        for (sig, hom) in &idx.all {
            for sigma in Perm::all(sig.arity()) {
                let mut tables = LevelTables::default();
                for level in [Level::Obj, Level::Mor] {
                    for x in level.ids(hom.as_ref()) {
                        tables.get_mut(level).insert(vec![x.clone()], m.act(sig, &sigma, x, level)?);
                    }
                }
                t.actions.insert((sig.clone(), sigma), tables);
            }
        }
        for sh in one_level_shapes(m, &idx) {
            let outer = idx.sig(sh.outer).clone();
            let inners: Vec<Signature> = sh.inners.iter().map(|&i| idx.sig(i).clone()).collect();
            let mut cats: Vec<&CatRef> = vec![idx.hom(sh.outer)];
            cats.extend(sh.inners.iter().map(|&i| idx.hom(i)));
            let mut tables = LevelTables::default();
            for level in [Level::Obj, Level::Mor] {
                let lists: Vec<&[Id]> = cats.iter().map(|c| level.ids(c.as_ref())).collect();
                let mut err = None;
                for_each_tuple(&lists, |tup| match m.gamma(&outer, &inners, &tup[0], &tup[1..], level) {
                    Ok(v) => {
                        tables.get_mut(level).insert(tup.to_vec(), v);
                    }
                    Err(e) => err = Some(e),
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
            t.gammas.insert((outer, inners), tables);
        }
        Ok(t)
    }

    pub fn set_unit(&mut self, a: Id, u: Id) {
        self.units.insert(a, u);
    }

    pub fn set_action(&mut self, sig: Signature, sigma: Perm, x: Id, level: Level, value: Id) {
        self.actions.entry((sig, sigma)).or_default().get_mut(level).insert(vec![x], value);
    }

    pub fn set_gamma(&mut self, outer: Signature, inners: Vec<Signature>, args: Vec<Id>, level: Level, value: Id) {
        self.gammas.entry((outer, inners)).or_default().get_mut(level).insert(args, value);
    }
}

impl Multicategory for TableMulticategory {
    fn key(&self) -> String {
        self.name.clone()
    }

    fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    fn objects(&self) -> &[Id] {
        &self.objects
    }

    fn hom(&self, sig: &Signature) -> Result<CatRef> {
        check_sig(self, sig)?;
        Ok(match self.homs.get(sig) {
            Some(h) => h.clone(),
            None => self.empty.clone(),
        })
    }

    fn unit(&self, a: &Id) -> Result<Id> {
        self.units.get(a).cloned().ok_or_else(|| Error::MissingEntry(format!("unit of {a}")))
    }

    fn act(&self, sig: &Signature, sigma: &Perm, x: &Id, level: Level) -> Result<Id> {
        self.actions
            .get(&(sig.clone(), sigma.clone()))
            .and_then(|t| t.get(level).get(std::slice::from_ref(x)))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("action {sig} sigma={sigma} on {x}")))
    }

    fn gamma(&self, outer: &Signature, inners: &[Signature], x: &Id, ys: &[Id], level: Level) -> Result<Id> {
        let mut args = Vec::with_capacity(ys.len() + 1);
        args.push(x.clone());
        args.extend(ys.iter().cloned());
        self.gammas
            .get(&(outer.clone(), inners.to_vec()))
            .and_then(|t| t.get(level).get(&args))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("gamma {outer} [{}] at {}", show_sigs(inners), show_ids(&args))))
    }

    fn is_formula(&self) -> bool {
        false
    }

    fn nonempty_signatures(&self, arity: usize) -> Result<Vec<Signature>> {
        Ok(self.homs.iter().filter(|(s, h)| s.arity() == arity && !h.is_empty()).map(|(s, _)| s.clone()).collect())
    }
}
