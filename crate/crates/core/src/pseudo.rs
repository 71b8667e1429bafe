//! Pseudo symmetric multifunctors: multifunctors that commute with the
//! symmetric action only up to chosen invertible 2-cells
//! `F_{sigma;f}: F(f sigma) -> F(f) sigma`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fincat::{find_inverse, for_each_tuple, CatRef};
use crate::functors::{
    check_functor_core, check_multifunctor, check_nat_core, compose_multifunctor, component, horiz_components,
    identity_components, identity_multifunctor, multifunctor_diff, same_functor, tabulate, vert_components,
    MultiFunctor, TableMap,
};
use crate::id::Id;
use crate::multicat::{same_multicat, show_ids, show_sigs, Level, MultiRef, Signature, SignatureIndex};
use crate::perm::Perm;
use crate::report::Report;

/// The chosen 2-cells of a pseudo symmetric multifunctor.
pub trait SymmetryIso: Send + Sync {
    /// `F_{sigma;f}` for a 1-cell `f` of `source.hom(sig)`, a 2-cell of
    /// `target.hom(F(sig) sigma)`.
    fn component(&self, sig: &Signature, sigma: &Perm, f: &Id) -> Result<Id>;
}

#[derive(Clone)]
pub struct PseudoSymMultiFunctor {
    pub underlying: MultiFunctor,
    pub iso: Arc<dyn SymmetryIso>,
}

impl fmt::Debug for PseudoSymMultiFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pseudo {:?}", self.underlying)
    }
}

impl PseudoSymMultiFunctor {
    pub fn name(&self) -> &str {
        &self.underlying.name
    }

    pub fn source(&self) -> &MultiRef {
        &self.underlying.source
    }

    pub fn target(&self) -> &MultiRef {
        &self.underlying.target
    }

    pub fn object(&self, a: &Id) -> Result<Id> {
        self.underlying.object(a)
    }

    pub fn apply(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        self.underlying.apply(sig, x, level)
    }

    pub fn iso(&self, sig: &Signature, sigma: &Perm, f: &Id) -> Result<Id> {
        self.iso.component(sig, sigma, f)
    }
}

/// `F_{sigma;f} = 1_{F(f) sigma}`: the data of a symmetric multifunctor.
struct IdentityIso(MultiFunctor);

impl SymmetryIso for IdentityIso {
    fn component(&self, sig: &Signature, sigma: &Perm, f: &Id) -> Result<Id> {
        let fsig = self.0.image_signature(sig)?;
        let x = self.0.target.act(&fsig, sigma, &self.0.apply(sig, f, Level::Obj)?, Level::Obj)?;
        self.0.target.hom(&fsig.act(sigma)?)?.identity(&x)
    }
}

/// The unique 2-cell `F(f sigma) -> F(f) sigma` in a thin target.
pub struct ForcedIso(pub MultiFunctor);

impl SymmetryIso for ForcedIso {
    fn component(&self, sig: &Signature, sigma: &Perm, f: &Id) -> Result<Id> {
        let g = &self.0;
        let fsig = g.image_signature(sig)?;
        let src = g.apply(&sig.act(sigma)?, &g.source.act(sig, sigma, f, Level::Obj)?, Level::Obj)?;
        let dst = g.target.act(&fsig, sigma, &g.apply(sig, f, Level::Obj)?, Level::Obj)?;
        let hom = g.target.hom(&fsig.act(sigma)?)?;
        match hom.hom_set(&src, &dst).as_slice() {
            [x] => Ok(x.clone()),
            xs => Err(Error::InvalidPseudo(format!("{} arrows {src} -> {dst} in {}", xs.len(), fsig.act(sigma)?))),
        }
    }
}

/// `j`: a symmetric multifunctor with identity symmetry isomorphisms.
/// Fails with `InvalidInput` unless `f` passes [`check_multifunctor`].
pub fn include_j(f: &MultiFunctor) -> Result<PseudoSymMultiFunctor> {
    let r = check_multifunctor(f);
    if !r.passed() {
        return Err(Error::InvalidInput(format!("{} is not a symmetric multifunctor: {}", f.name, r.failed_axioms().join(", "))));
    }
    Ok(include_j_unchecked(f))
}

pub fn include_j_unchecked(f: &MultiFunctor) -> PseudoSymMultiFunctor {
    PseudoSymMultiFunctor { underlying: f.clone(), iso: Arc::new(IdentityIso(f.clone())) }
}

pub fn identity_pseudo(m: MultiRef) -> PseudoSymMultiFunctor {
    include_j_unchecked(&identity_multifunctor(m))
}

struct CompositeIso {
    g: PseudoSymMultiFunctor,
    f: PseudoSymMultiFunctor,
}

impl SymmetryIso for CompositeIso {
    // (GF)_{sigma;x} = G_{sigma;Fx} . G(F_{sigma;x})
    fn component(&self, sig: &Signature, sigma: &Perm, x: &Id) -> Result<Id> {
        let (g, f) = (&self.g, &self.f);
        let fsig = f.underlying.image_signature(sig)?;
        let fs = fsig.act(sigma)?;
        let inner = g.apply(&fs, &f.iso(sig, sigma, x)?, Level::Mor)?;
        let outer = g.iso(&fsig, sigma, &f.apply(sig, x, Level::Obj)?)?;
        let q = g.underlying.image_signature(&fs)?;
        g.target().hom(&q)?.compose(&outer, &inner)
    }
}

/// `g` after `f`.
pub fn compose_pseudo(g: &PseudoSymMultiFunctor, f: &PseudoSymMultiFunctor) -> Result<PseudoSymMultiFunctor> {
    let underlying = compose_multifunctor(&g.underlying, &f.underlying)?;
    Ok(PseudoSymMultiFunctor { underlying, iso: Arc::new(CompositeIso { g: g.clone(), f: f.clone() }) })
}

/// Explicit symmetry isomorphism tables.
#[derive(Clone, Default)]
pub struct TableIso {
    pub entries: BTreeMap<(Signature, Perm), BTreeMap<Id, Id>>,
}

impl SymmetryIso for TableIso {
    fn component(&self, sig: &Signature, sigma: &Perm, f: &Id) -> Result<Id> {
        self.entries
            .get(&(sig.clone(), sigma.clone()))
            .and_then(|t| t.get(f))
            .cloned()
            .ok_or_else(|| Error::MissingEntry(format!("F_{{{sigma};{f}}} at {sig}")))
    }
}

pub fn tabulate_iso(f: &PseudoSymMultiFunctor) -> Result<TableIso> {
    let idx = SignatureIndex::new(f.source().as_ref())?;
    let mut t = TableIso::default();
    for (sig, hom) in &idx.all {
        for sigma in Perm::all(sig.arity()) {
            let mut e = BTreeMap::new();
            for x in hom.objects() {
                e.insert(x.clone(), f.iso(sig, &sigma, x)?);
            }
            t.entries.insert((sig.clone(), sigma), e);
        }
    }
    Ok(t)
}

/// Replaces every piece of data of `f` by a lookup table.
pub fn materialize_pseudo(f: &PseudoSymMultiFunctor) -> Result<(PseudoSymMultiFunctor, TableMap, TableIso)> {
    let map = tabulate(&f.underlying)?;
    let iso = tabulate_iso(f)?;
    let underlying = MultiFunctor { map: Arc::new(map.clone()), ..f.underlying.clone() };
    Ok((PseudoSymMultiFunctor { underlying, iso: Arc::new(iso.clone()) }, map, iso))
}

/// Everything checked on a symmetric multifunctor except the symmetric
/// action, plus typing, invertibility, naturality and the four coherence
/// axioms of the symmetry isomorphisms.
pub fn check_pseudo(f: &PseudoSymMultiFunctor) -> Report {
    let mut r = Report::new(f.name());
    let idx = match SignatureIndex::new(f.source().as_ref()) {
        Ok(i) => i,
        Err(e) => {
            r.axiom("signatures").fail(f.source().key(), e.to_string());
            return r;
        }
    };
    check_functor_core(&f.underlying, &idx, &mut r);
    let parts: Vec<Report> = idx.all.par_iter().map(|(sig, hom)| check_iso_at(f, sig, hom)).collect();
    for p in parts {
        r.merge(p);
    }
    check_equivariance(f, &idx, &mut r);
    r
}

fn check_iso_at(f: &PseudoSymMultiFunctor, sig: &Signature, hom: &CatRef) -> Report {
    let mut r = Report::new("");
    for name in ["iso-typing", "iso-invertible", "naturality", "unit-permutation", "product-permutation"] {
        r.axiom(name);
    }
    let (m, n) = (f.source(), f.target());
    let Ok(fsig) = f.underlying.image_signature(sig) else {
        r.axiom("iso-typing").fail(sig.to_string(), "object map undefined".into());
        return r;
    };
    let perms = Perm::all(sig.arity());
    for sigma in &perms {
        let ssig = sig.act(sigma).unwrap();
        let fs = fsig.act(sigma).unwrap();
        let target = match n.hom(&fs) {
            Ok(h) => h,
            Err(e) => {
                r.axiom("iso-typing").fail(format!("{sig} sigma={sigma}"), e.to_string());
                continue;
            }
        };
        for x in hom.objects() {
            let w = || format!("{sig} sigma={sigma} f={x}");
            let iso = f.iso(sig, sigma, x);
            let ends = (|| {
                let src = f.apply(&ssig, &m.act(sig, sigma, x, Level::Obj)?, Level::Obj)?;
                let dst = n.act(&fsig, sigma, &f.apply(sig, x, Level::Obj)?, Level::Obj)?;
                Ok::<_, Error>((src, dst))
            })();
            let typing = r.axiom("iso-typing");
            match (&iso, &ends) {
                (Ok(i), Ok((s, d))) => {
                    let ok = target.has_morphism(i) && target.source(i).as_ref() == Ok(s) && target.target(i).as_ref() == Ok(d);
                    typing.record(ok, w, || format!("{i} is not a 2-cell {s} -> {d}"));
                }
                (Err(e), _) | (_, Err(e)) => typing.record(false, w, || e.to_string()),
            }
            if let Ok(i) = &iso {
                r.axiom("iso-invertible").record(find_inverse(target.as_ref(), i).is_some(), w, || format!("{i} has no inverse"));
            }
            if sigma.is_identity() {
                let id = f.apply(sig, x, Level::Obj).and_then(|y| target.identity(&y));
                r.axiom("unit-permutation").compare(iso.clone(), id, w);
            }
            for tau in &perms {
                let st = sigma.compose(tau).unwrap();
                let lhs = f.iso(sig, &st, x);
                let rhs = (|| {
                    let outer = n.act(&fs, tau, &f.iso(sig, sigma, x)?, Level::Mor)?;
                    let inner = f.iso(&ssig, tau, &m.act(sig, sigma, x, Level::Obj)?)?;
                    n.hom(&fs.act(tau)?)?.compose(&outer, &inner)
                })();
                r.axiom("product-permutation").compare(lhs, rhs, || format!("{sig} sigma={sigma} tau={tau} f={x}"));
            }
        }
        // (F alpha) sigma . F_{sigma;f} = F_{sigma;g} . F(alpha sigma)
        for alpha in hom.morphisms() {
            let lhs = (|| {
                let a = n.act(&fsig, sigma, &f.apply(sig, alpha, Level::Mor)?, Level::Mor)?;
                target.compose(&a, &f.iso(sig, sigma, &hom.source(alpha)?)?)
            })();
            let rhs = (|| {
                let a = f.apply(&ssig, &m.act(sig, sigma, alpha, Level::Mor)?, Level::Mor)?;
                target.compose(&f.iso(sig, sigma, &hom.target(alpha)?)?, &a)
            })();
            r.axiom("naturality").compare(lhs, rhs, || format!("{sig} sigma={sigma} alpha={alpha}"));
        }
    }
    r
}

fn check_equivariance(f: &PseudoSymMultiFunctor, idx: &SignatureIndex, r: &mut Report) {
    let (m, n) = (f.source(), f.target());
    let bound = m.arity_bound();
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
            part.axiom("top-equivariance");
            part.axiom("bottom-equivariance");
            let outer = idx.sig(*i);
            let inners: Vec<Signature> = inner.iter().map(|&j| idx.sig(j).clone()).collect();
            let prep = (|| {
                let mid = Signature::compose(outer, &inners)?;
                let f_outer = f.underlying.image_signature(outer)?;
                let f_inners = inners.iter().map(|s| f.underlying.image_signature(s)).collect::<Result<Vec<_>>>()?;
                Ok::<_, Error>((mid, f_outer, f_inners))
            })();
            let (mid, f_outer, f_inners) = match prep {
                Ok(p) => p,
                Err(e) => {
                    part.axiom("top-equivariance").fail(outer.to_string(), e.to_string());
                    return part;
                }
            };
            let mut cats: Vec<&CatRef> = vec![idx.hom(*i)];
            cats.extend(inner.iter().map(|&j| idx.hom(j)));
            let lists: Vec<&[Id]> = cats.iter().map(|c| c.objects()).collect();
            let n_in = inners.len();
            let show = |t: &[Id]| format!("outer {outer} inners [{}] at ({}; {})", show_sigs(&inners), t[0], show_ids(&t[1..]));
            for sigma in Perm::all(n_in) {
                let inners_s = sigma.act_on_list(&inners).unwrap();
                let f_inners_s = sigma.act_on_list(&f_inners).unwrap();
                let ids: Vec<Perm> = inners_s.iter().map(|g| Perm::identity(g.arity())).collect();
                let big = sigma.block(&ids).unwrap();
                let f_outer_s = f_outer.act(&sigma).unwrap();
                let check = part.axiom("top-equivariance");
                for_each_tuple(&lists, |t| {
                    let (x, ys) = (&t[0], &t[1..]);
                    let lhs = m.gamma(outer, &inners, x, ys, Level::Obj).and_then(|fg| f.iso(&mid, &big, &fg));
                    let rhs = (|| {
                        let ys_s = sigma.act_on_list(ys)?;
                        let ids = inners_s
                            .iter()
                            .zip(&ys_s)
                            .zip(&f_inners_s)
                            .map(|((s, y), fs)| n.hom(fs)?.identity(&f.apply(s, y, Level::Obj)?))
                            .collect::<Result<Vec<_>>>()?;
                        n.gamma(&f_outer_s, &f_inners_s, &f.iso(outer, &sigma, x)?, &ids, Level::Mor)
                    })();
                    check.compare(lhs, rhs, || format!("{} sigma={sigma}", show(t)));
                });
            }
            let degrees: Vec<usize> = inners.iter().map(Signature::arity).collect();
            for taus in crate::multicat::perm_tuples(&degrees) {
                let big = Perm::identity(n_in).block(&taus).unwrap();
                let f_inners_t: Vec<Signature> = f_inners.iter().zip(&taus).map(|(s, t)| s.act(t).unwrap()).collect();
                let check = part.axiom("bottom-equivariance");
                for_each_tuple(&lists, |t| {
                    let (x, ys) = (&t[0], &t[1..]);
                    let lhs = m.gamma(outer, &inners, x, ys, Level::Obj).and_then(|fg| f.iso(&mid, &big, &fg));
                    let rhs = (|| {
                        let id = n.hom(&f_outer)?.identity(&f.apply(outer, x, Level::Obj)?)?;
                        let isos = inners.iter().zip(&taus).zip(ys).map(|((s, tau), y)| f.iso(s, tau, y)).collect::<Result<Vec<_>>>()?;
                        n.gamma(&f_outer, &f_inners_t, &id, &isos, Level::Mor)
                    })();
                    check.compare(lhs, rhs, || {
                        let ts: Vec<String> = taus.iter().map(ToString::to_string).collect();
                        format!("{} taus=[{}]", show(t), ts.join(" "))
                    });
                });
            }
            part
        })
        .collect();
    for p in parts {
        r.merge(p);
    }
}

/// The first point where two pseudo symmetric multifunctors differ.
pub fn pseudo_diff(f: &PseudoSymMultiFunctor, g: &PseudoSymMultiFunctor) -> Option<String> {
    if let Some(d) = multifunctor_diff(&f.underlying, &g.underlying) {
        return Some(d);
    }
    let idx = match SignatureIndex::new(f.source().as_ref()) {
        Ok(i) => i,
        Err(e) => return Some(e.to_string()),
    };
    idx.all.par_iter().find_map_first(|(sig, hom)| {
        for sigma in Perm::all(sig.arity()) {
            for x in hom.objects() {
                let (a, b) = (f.iso(sig, &sigma, x), g.iso(sig, &sigma, x));
                if a != b || a.is_err() {
                    return Some(format!("iso {sig} sigma={sigma} f={x}: {a:?} vs {b:?}"));
                }
            }
        }
        None
    })
}

pub fn pseudo_equal(f: &PseudoSymMultiFunctor, g: &PseudoSymMultiFunctor) -> bool {
    pseudo_diff(f, g).is_none()
}

#[derive(Clone)]
pub struct PseudoSymMultiNatTrans {
    pub name: String,
    pub source: PseudoSymMultiFunctor,
    pub target: PseudoSymMultiFunctor,
    pub components: BTreeMap<Id, Id>,
}

impl fmt::Debug for PseudoSymMultiNatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.name, self.source.name(), self.target.name())
    }
}

/// (trans1), (trans2), and compatibility with the symmetry isomorphisms:
/// `gamma(1_{theta_b}; F_{sigma;f}) = gamma(G_{sigma;f}; 1_{theta_{a_sigma(j)}})`.
pub fn check_pseudo_nat(t: &PseudoSymMultiNatTrans) -> Report {
    let mut r = Report::new(&t.name);
    let (f, g) = (&t.source, &t.target);
    if !same_multicat(f.source(), g.source()) || !same_multicat(f.target(), g.target()) {
        r.axiom("parallel").fail(t.name.clone(), "source and target are not parallel".into());
        return r;
    }
    check_nat_core(&f.underlying, &g.underlying, &t.components, &mut r);
    let idx = match SignatureIndex::new(f.source().as_ref()) {
        Ok(i) => i,
        Err(e) => {
            r.axiom("signatures").fail(f.source().key(), e.to_string());
            return r;
        }
    };
    let n = f.target().clone();
    let tsig = |a: &Id| Ok::<_, Error>(Signature::new(vec![f.object(a)?], g.object(a)?));
    let parts: Vec<Report> = idx
        .all
        .par_iter()
        .map(|(sig, hom)| {
            let mut part = Report::new("");
            let check = part.axiom("pseudo-symmetry");
            for sigma in Perm::all(sig.arity()) {
                let prep = (|| {
                    let fs = f.underlying.image_signature(sig)?.act(&sigma)?;
                    let gs = g.underlying.image_signature(sig)?.act(&sigma)?;
                    let out_sig = tsig(&sig.output)?;
                    let id_out = n.hom(&out_sig)?.identity(&component(&t.components, &sig.output)?)?;
                    let ins = sigma.act_on_list(&sig.inputs)?;
                    let in_sigs = ins.iter().map(tsig).collect::<Result<Vec<_>>>()?;
                    let id_ins = ins
                        .iter()
                        .zip(&in_sigs)
                        .map(|(a, s)| n.hom(s)?.identity(&component(&t.components, a)?))
                        .collect::<Result<Vec<_>>>()?;
                    Ok::<_, Error>((fs, gs, out_sig, id_out, in_sigs, id_ins))
                })();
                let (fs, gs, out_sig, id_out, in_sigs, id_ins) = match prep {
                    Ok(p) => p,
                    Err(e) => {
                        check.fail(format!("{sig} sigma={sigma}"), e.to_string());
                        continue;
                    }
                };
                for x in hom.objects() {
                    let lhs = f.iso(sig, &sigma, x).and_then(|i| n.gamma(&out_sig, std::slice::from_ref(&fs), &id_out, &[i], Level::Mor));
                    let rhs = g.iso(sig, &sigma, x).and_then(|i| n.gamma(&gs, &in_sigs, &i, &id_ins, Level::Mor));
                    check.compare(lhs, rhs, || format!("{sig} sigma={sigma} f={x}"));
                }
            }
            part
        })
        .collect();
    for p in parts {
        r.merge(p);
    }
    r
}

pub fn identity_pseudo_nat(f: &PseudoSymMultiFunctor) -> Result<PseudoSymMultiNatTrans> {
    Ok(PseudoSymMultiNatTrans {
        name: format!("1_{}", f.name()),
        source: f.clone(),
        target: f.clone(),
        components: identity_components(&f.underlying)?,
    })
}

fn same_pseudo(f: &PseudoSymMultiFunctor, g: &PseudoSymMultiFunctor) -> bool {
    (Arc::ptr_eq(&f.iso, &g.iso) && same_functor(&f.underlying, &g.underlying)) || pseudo_equal(f, g)
}

pub fn pseudo_vert_compose(zeta: &PseudoSymMultiNatTrans, theta: &PseudoSymMultiNatTrans) -> Result<PseudoSymMultiNatTrans> {
    if !same_pseudo(&theta.target, &zeta.source) {
        return Err(Error::BoundaryMismatch(format!("{} does not start where {} ends", zeta.name, theta.name)));
    }
    let components = vert_components(
        &theta.source.underlying,
        &theta.target.underlying,
        &zeta.target.underlying,
        &zeta.components,
        &theta.components,
    )?;
    Ok(PseudoSymMultiNatTrans {
        name: format!("{}.{}", zeta.name, theta.name),
        source: theta.source.clone(),
        target: zeta.target.clone(),
        components,
    })
}

pub fn pseudo_horiz_compose(zeta: &PseudoSymMultiNatTrans, theta: &PseudoSymMultiNatTrans) -> Result<PseudoSymMultiNatTrans> {
    if !same_multicat(theta.source.target(), zeta.source.source()) {
        return Err(Error::BoundaryMismatch(format!("{} cannot follow {}", zeta.name, theta.name)));
    }
    let components = horiz_components(
        &theta.source.underlying,
        &theta.target.underlying,
        &zeta.source.underlying,
        &zeta.target.underlying,
        &zeta.components,
        &theta.components,
    )?;
    Ok(PseudoSymMultiNatTrans {
        name: format!("{}*{}", zeta.name, theta.name),
        source: compose_pseudo(&zeta.source, &theta.source)?,
        target: compose_pseudo(&zeta.target, &theta.target)?,
        components,
    })
}

pub fn pseudo_nat_equal(a: &PseudoSymMultiNatTrans, b: &PseudoSymMultiNatTrans) -> bool {
    a.components == b.components && pseudo_equal(&a.source, &b.source) && pseudo_equal(&a.target, &b.target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{assoc_operad, barratt_eccles, product_multicat};
    use crate::functors::{projection, thin_map, Side};

    /// Ass -> EΣ*, every operation to the identity permutation.
    fn collapse(n: usize) -> PseudoSymMultiFunctor {
        let f = thin_map("collapse", assoc_operad(n), barratt_eccles(n), |a| Ok(a.clone()), |sig, _| {
            Ok(Id::Perm(Perm::identity(sig.arity())))
        })
        .unwrap();
        PseudoSymMultiFunctor { underlying: f.clone(), iso: Arc::new(ForcedIso(f)) }
    }

    #[test]
    fn include_j_of_projection_passes() {
        let p = product_multicat(assoc_operad(3), barratt_eccles(3)).unwrap();
        let f = include_j(&projection(&p, Side::Left).unwrap()).unwrap();
        let r = check_pseudo(&f);
        assert!(r.passed(), "{r}");
        assert!(r.get("top-equivariance").unwrap().instances > 0);
    }

    #[test]
    fn collapse_is_pseudo_but_not_symmetric() {
        let f = collapse(3);
        let r = check_pseudo(&f);
        assert!(r.passed(), "{r}");
        let s = check_multifunctor(&f.underlying);
        assert_eq!(s.failed_axioms(), ["symmetric-action"]);
        assert!(include_j(&f.underlying).is_err());
    }

    #[test]
    fn corrupted_iso_is_caught() {
        let (_, map, mut iso) = materialize_pseudo(&collapse(3)).unwrap();
        let sig = Signature::new(vec![Id::star(); 2], Id::star());
        let sw = Perm::from_images(&[2, 1]).unwrap();
        let e = iso.entries.get_mut(&(sig, sw)).unwrap();
        let k = e.keys().next().unwrap().clone();
        let dst = Id::Perm(Perm::identity(2));
        e.insert(k, Id::arrow(dst.clone(), dst));
        let f = collapse(3);
        let bad = PseudoSymMultiFunctor { underlying: MultiFunctor { map: Arc::new(map), ..f.underlying }, iso: Arc::new(iso) };
        let r = check_pseudo(&bad);
        assert!(!r.passed());
        assert!(r.failed_axioms().contains(&"iso-typing"));
        assert!(r.failed_axioms().contains(&"product-permutation"));
    }

    #[test]
    fn composition_with_identity() {
        let f = collapse(3);
        let id = identity_pseudo(barratt_eccles(3));
        let g = compose_pseudo(&id, &f).unwrap();
        assert!(pseudo_equal(&g, &f));
        let h = compose_pseudo(&f, &identity_pseudo(assoc_operad(3))).unwrap();
        assert!(pseudo_equal(&h, &f));
        assert!(check_pseudo(&g).passed());
    }

    #[test]
    fn identity_nat_passes() {
        let f = collapse(3);
        let t = identity_pseudo_nat(&f).unwrap();
        assert!(check_pseudo_nat(&t).passed());
        let v = pseudo_vert_compose(&t, &t).unwrap();
        assert!(pseudo_nat_equal(&v, &t));
    }
}
