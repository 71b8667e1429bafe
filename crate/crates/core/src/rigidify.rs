//! Rigidification. A pseudo symmetric multifunctor `F: M -> N` factors
//! uniquely through `eta_M: M -> M x EΣ*` as a symmetric multifunctor
//! `phi(F): M x EΣ* -> N`; `eta_star` goes back.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::construct::{barratt_eccles, end_of_monoid, is_barratt_eccles, product_multicat, split_signature, FinCommMonoid};
use crate::error::{Error, Result};
use crate::functors::{
    check_multifunctor, check_multinat, compose_multifunctor, identity_multifunctor, multifunctor_diff, pairing,
    product_map, projection, to_terminal, CellMap, MultiFunctor, MultiNatTrans, Side,
};
use crate::id::Id;
use crate::multicat::{same_multicat, Level, MultiRef, Signature};
use crate::perm::Perm;
use crate::pseudo::{
    check_pseudo, check_pseudo_nat, compose_pseudo, identity_pseudo, identity_pseudo_nat, include_j_unchecked,
    pseudo_diff, pseudo_horiz_compose, PseudoSymMultiFunctor, PseudoSymMultiNatTrans, SymmetryIso,
};
use crate::report::Report;

fn perm_id(p: Perm) -> Id {
    Id::Perm(p)
}

/// `M x EΣ*` at the arity bound of `M`.
pub fn with_be(m: &MultiRef) -> Result<MultiRef> {
    product_multicat(m.clone(), barratt_eccles(m.arity_bound()))
}

struct EtaMap;

impl CellMap for EtaMap {
    fn object(&self, a: &Id) -> Result<Id> {
        Ok(Id::pair(a.clone(), Id::star()))
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        let e = perm_id(Perm::identity(sig.arity()));
        Ok(match level {
            Level::Obj => Id::pair(x.clone(), e),
            Level::Mor => Id::pair(x.clone(), Id::arrow(e.clone(), e)),
        })
    }
}

struct EtaIso(MultiRef);

impl SymmetryIso for EtaIso {
    // (1_{f sigma}, E_id^sigma)
    fn component(&self, sig: &Signature, sigma: &Perm, f: &Id) -> Result<Id> {
        let fs = self.0.act(sig, sigma, f, Level::Obj)?;
        let one = self.0.hom(&sig.act(sigma)?)?.identity(&fs)?;
        Ok(Id::pair(one, Id::arrow(perm_id(Perm::identity(sig.arity())), perm_id(sigma.clone()))))
    }
}

/// `eta_M: M -> M x EΣ*`, `f -> (f, id)`, with `eta_{sigma;f} = (1_{f sigma}, E_id^sigma)`.
pub fn eta(m: &MultiRef) -> Result<PseudoSymMultiFunctor> {
    let underlying = MultiFunctor::new(format!("eta[{}]", m.key()), m.clone(), with_be(m)?, Arc::new(EtaMap))?;
    Ok(PseudoSymMultiFunctor { underlying, iso: Arc::new(EtaIso(m.clone())) })
}

struct RigidMap(PseudoSymMultiFunctor);

impl RigidMap {
    fn m(&self) -> &MultiRef {
        self.0.source()
    }

    fn n(&self) -> &MultiRef {
        self.0.target()
    }

    /// `F(f sigma^-1) sigma`, or the same on a 2-cell.
    fn twisted(&self, sig: &Signature, sigma: &Perm, x: &Id, level: Level) -> Result<Id> {
        let inv = sigma.inverse();
        let y = self.m().act(sig, &inv, x, level)?;
        let s_inv = sig.act(&inv)?;
        let fy = self.0.apply(&s_inv, &y, level)?;
        let fs = self.0.underlying.image_signature(&s_inv)?;
        self.n().act(&fs, sigma, &fy, level)
    }

    /// `(F_{tau sigma^-1; g tau^-1}) sigma`, the image of `(1_g, E_sigma^tau)`.
    fn exchange(&self, sig: &Signature, g: &Id, sigma: &Perm, tau: &Perm) -> Result<Id> {
        let tau_inv = tau.inverse();
        let rho = tau.compose(&sigma.inverse())?;
        let s = sig.act(&tau_inv)?;
        let h = self.m().act(sig, &tau_inv, g, Level::Obj)?;
        let iso = self.0.iso(&s, &rho, &h)?;
        let at = self.0.underlying.image_signature(&sig.act(&sigma.inverse())?)?;
        self.n().act(&at, sigma, &iso, Level::Mor)
    }
}

impl CellMap for RigidMap {
    fn object(&self, a: &Id) -> Result<Id> {
        let (x, _) = a.expect_pair()?;
        self.0.object(x)
    }

    fn map(&self, sig: &Signature, x: &Id, level: Level) -> Result<Id> {
        let (sig_m, _) = split_signature(sig)?;
        let (f, p) = x.expect_pair()?;
        if level == Level::Obj {
            return self.twisted(&sig_m, p.expect_perm()?, f, Level::Obj);
        }
        let (s, t) = p.expect_arrow()?;
        let (sigma, tau) = (s.expect_perm()?, t.expect_perm()?);
        let hom_m = self.m().hom(&sig_m)?;
        let (src, dst) = (hom_m.source(f)?, hom_m.target(f)?);
        let target = self.n().hom(&self.0.underlying.image_signature(&sig_m)?)?;
        // (alpha, E) = (1_g, E) . (alpha, 1_sigma) = (alpha, 1_tau) . (1_f, E)
        let a = target.compose(&self.exchange(&sig_m, &dst, sigma, tau)?, &self.twisted(&sig_m, sigma, f, Level::Mor)?)?;
        let b = target.compose(&self.twisted(&sig_m, tau, f, Level::Mor)?, &self.exchange(&sig_m, &src, sigma, tau)?)?;
        if a != b {
            return Err(Error::Exchange(format!("{sig} at {x}: {a} vs {b}")));
        }
        Ok(a)
    }
}

/// `phi(F)` without validating `F`.
pub fn rigidify_unchecked(f: &PseudoSymMultiFunctor) -> Result<MultiFunctor> {
    MultiFunctor::new(format!("phi({})", f.name()), with_be(f.source())?, f.target().clone(), Arc::new(RigidMap(f.clone())))
}

/// The symmetric multifunctor `phi(F): M x EΣ* -> N` with `phi(F) eta_M = F`.
/// Fails with `InvalidPseudo` unless `F` passes [`check_pseudo`].
pub fn rigidify(f: &PseudoSymMultiFunctor) -> Result<MultiFunctor> {
    let r = check_pseudo(f);
    if !r.passed() {
        return Err(Error::InvalidPseudo(format!("{}: {}", f.name(), r.failed_axioms().join(", "))));
    }
    rigidify_unchecked(f)
}

fn star_components(t: &BTreeMap<Id, Id>) -> BTreeMap<Id, Id> {
    t.iter().map(|(a, x)| (Id::pair(a.clone(), Id::star()), x.clone())).collect()
}

/// `phi(theta)_{(a,*)} = theta_a`, without validating `theta`.
pub fn rigidify_nat_unchecked(t: &PseudoSymMultiNatTrans) -> Result<MultiNatTrans> {
    Ok(MultiNatTrans {
        name: format!("phi({})", t.name),
        source: rigidify_unchecked(&t.source)?,
        target: rigidify_unchecked(&t.target)?,
        components: star_components(&t.components),
    })
}

pub fn rigidify_nat(t: &PseudoSymMultiNatTrans) -> Result<MultiNatTrans> {
    let r = check_pseudo_nat(t);
    if !r.passed() {
        return Err(Error::InvalidInput(format!("{}: {}", t.name, r.failed_axioms().join(", "))));
    }
    rigidify_nat_unchecked(t)
}

/// The left factor `M` of a source `M x EΣ*`.
fn be_base(g: &MultiFunctor) -> Result<MultiRef> {
    match g.source.factors() {
        Some((m, be)) if is_barratt_eccles(be.as_ref()) && be.arity_bound() == m.arity_bound() => Ok(m),
        _ => Err(Error::ShapeMismatch(format!("{} is not of the form M x EΣ*", g.source.key()))),
    }
}

/// `eta*(G) = j(G) eta_M` for `G: M x EΣ* -> N`.
pub fn eta_star(g: &MultiFunctor) -> Result<PseudoSymMultiFunctor> {
    let m = be_base(g)?;
    let mut out = compose_pseudo(&include_j_unchecked(g), &eta(&m)?)?;
    out.underlying.name = format!("eta*({})", g.name);
    Ok(out)
}

/// Whiskering by `eta_M`: `a -> theta_{(a,*)}`.
pub fn eta_star_nat(t: &MultiNatTrans) -> Result<PseudoSymMultiNatTrans> {
    let m = be_base(&t.source)?;
    let components = m
        .objects()
        .iter()
        .map(|a| {
            let key = Id::pair(a.clone(), Id::star());
            t.components.get(&key).cloned().map(|x| (a.clone(), x)).ok_or_else(|| Error::MissingEntry(format!("component at {key}")))
        })
        .collect::<Result<_>>()?;
    Ok(PseudoSymMultiNatTrans {
        name: format!("eta*({})", t.name),
        source: eta_star(&t.source)?,
        target: eta_star(&t.target)?,
        components,
    })
}

/// `psi F = phi(eta_N F): M x EΣ* -> N x EΣ*`.
pub fn psi_1cell(f: &PseudoSymMultiFunctor) -> Result<MultiFunctor> {
    let mut g = rigidify_unchecked(&compose_pseudo(&eta(f.target())?, f)?)?;
    g.name = format!("psi({})", f.name());
    Ok(g)
}

/// `psi theta = phi(1_{eta_N} * theta)`.
pub fn psi_2cell(t: &PseudoSymMultiNatTrans) -> Result<MultiNatTrans> {
    let e = identity_pseudo_nat(&eta(t.source.target())?)?;
    let mut out = rigidify_nat_unchecked(&pseudo_horiz_compose(&e, t)?)?;
    out.name = format!("psi({})", t.name);
    Ok(out)
}

/// The projection `pi_M: M x EΣ* -> M`.
pub fn pi(m: &MultiRef) -> Result<MultiFunctor> {
    projection(&with_be(m)?, Side::Left)
}

/// The diagonal `EΣ* -> EΣ* x EΣ*`.
pub fn delta(n: usize) -> Result<MultiFunctor> {
    crate::functors::diagonal(barratt_eccles(n))
}

/// `1 x Delta: M x EΣ* -> (M x EΣ*) x EΣ*`, `(f, s) -> ((f, s), s)`.
pub fn one_times_delta(m: &MultiRef) -> Result<MultiFunctor> {
    let p = with_be(m)?;
    let mut f = pairing(&identity_multifunctor(p.clone()), &projection(&p, Side::Right)?)?;
    f.name = format!("1xDelta[{}]", m.key());
    Ok(f)
}

/// Composition of the 2-category with 1-cells `M x EΣ* -> N`:
/// `G o' F = G (F x 1)(1 x Delta)`.
pub fn d_compose(g: &MultiFunctor, f: &MultiFunctor) -> Result<MultiFunctor> {
    let m = be_base(f)?;
    let n = be_base(g)?;
    if !same_multicat(&n, &f.target) {
        return Err(Error::ShapeMismatch(format!("{} does not start at {} x EΣ*", g.name, f.target.key())));
    }
    let fx1 = product_map(f, &identity_multifunctor(barratt_eccles(m.arity_bound())))?;
    let inner = compose_multifunctor(&fx1, &one_times_delta(&m)?)?;
    let mut out = compose_multifunctor(g, &inner)?;
    out.name = format!("{} o' {}", g.name, f.name);
    Ok(out)
}

/// Cells between a fixed pair of multicategories `M`, `N` on which the
/// adjunction is verified.
#[derive(Clone, Default)]
pub struct Corpus {
    /// Pseudo symmetric `M -> N`.
    pub pseudo: Vec<PseudoSymMultiFunctor>,
    /// Symmetric `M x EΣ* -> N`.
    pub rigid: Vec<MultiFunctor>,
    /// Symmetric `M -> N`.
    pub symmetric: Vec<MultiFunctor>,
    pub pseudo_nats: Vec<PseudoSymMultiNatTrans>,
    pub rigid_nats: Vec<MultiNatTrans>,
}

fn nat_diff(a: &BTreeMap<Id, Id>, b: &BTreeMap<Id, Id>) -> Option<String> {
    if a == b {
        None
    } else {
        Some(format!("components {a:?} vs {b:?}"))
    }
}

fn record(r: &mut Report, axiom: &str, witness: &str, diff: Result<Option<String>>) {
    let detail = match diff {
        Ok(d) => d,
        Err(e) => Some(e.to_string()),
    };
    let ok = detail.is_none();
    r.axiom(axiom).record(ok, || witness.to_string(), || detail.unwrap_or_default());
}

/// Verifies on the corpus that `phi` and `eta*` are mutually inverse on
/// 1-cells and 2-cells, the triangle identities at `M` and `N`, and the
/// strict naturality squares of `eta` and `pi`.
///
/// The round trip `eta* phi` returns its input unchanged even for data that
/// violates the axioms, so the corpus itself is validated too, and `phi` of
/// each pseudo functor must be a symmetric multifunctor.
pub fn check_adjunction(m: &MultiRef, n: &MultiRef, corpus: &Corpus) -> Report {
    let mut r = Report::new(format!("adjunction {} -> {}", m.key(), n.key()));
    for axiom in [
        "corpus-pseudo",
        "corpus-rigid",
        "corpus-nats",
        "phi-symmetric",
        "eta*-phi-1cells",
        "phi-eta*-1cells",
        "eta*-phi-2cells",
        "phi-eta*-2cells",
    ] {
        r.axiom(axiom);
    }
    let parts: Vec<Report> = corpus
        .pseudo
        .par_iter()
        .map(|f| {
            let mut p = Report::new("");
            record(&mut p, "corpus-pseudo", f.name(), Ok(check_pseudo(f).first_failure()));
            record(&mut p, "phi-symmetric", f.name(), rigidify_unchecked(f).map(|g| check_multifunctor(&g).first_failure()));
            record(&mut p, "eta*-phi-1cells", f.name(), rigidify_unchecked(f).and_then(|g| eta_star(&g)).map(|h| pseudo_diff(&h, f)));
            record(&mut p, "eta-naturality", f.name(), (|| {
                let lhs = compose_pseudo(&eta(n)?, f)?;
                let rhs = compose_pseudo(&include_j_unchecked(&psi_1cell(f)?), &eta(m)?)?;
                Ok(pseudo_diff(&lhs, &rhs))
            })());
            p
        })
        .collect();
    for p in parts {
        r.merge(p);
    }
    let parts: Vec<Report> = corpus
        .rigid
        .par_iter()
        .map(|g| {
            let mut p = Report::new("");
            record(&mut p, "corpus-rigid", &g.name, Ok(check_multifunctor(g).first_failure()));
            record(&mut p, "phi-eta*-1cells", &g.name, eta_star(g).and_then(|f| rigidify_unchecked(&f)).map(|h| multifunctor_diff(&h, g)));
            p
        })
        .collect();
    for p in parts {
        r.merge(p);
    }
    for t in &corpus.pseudo_nats {
        record(&mut r, "corpus-nats", &t.name, Ok(check_pseudo_nat(t).first_failure()));
        let diff = rigidify_nat_unchecked(t).and_then(|s| eta_star_nat(&s)).map(|u| {
            nat_diff(&u.components, &t.components)
                .or_else(|| pseudo_diff(&u.source, &t.source))
                .or_else(|| pseudo_diff(&u.target, &t.target))
        });
        record(&mut r, "eta*-phi-2cells", &t.name, diff);
    }
    for t in &corpus.rigid_nats {
        record(&mut r, "corpus-nats", &t.name, Ok(check_multinat(t).first_failure()));
        let diff = eta_star_nat(t).and_then(|s| rigidify_nat_unchecked(&s)).map(|u| {
            nat_diff(&u.components, &t.components)
                .or_else(|| multifunctor_diff(&u.source, &t.source))
                .or_else(|| multifunctor_diff(&u.target, &t.target))
        });
        record(&mut r, "phi-eta*-2cells", &t.name, diff);
    }
    for x in [m, n] {
        record(&mut r, "triangle-eta", &x.key(), (|| {
            let lhs = compose_pseudo(&include_j_unchecked(&pi(x)?), &eta(x)?)?;
            Ok(pseudo_diff(&lhs, &identity_pseudo(x.clone())))
        })());
        record(&mut r, "triangle-pi", &x.key(), (|| {
            let p = with_be(x)?;
            let lhs = compose_multifunctor(&pi(&p)?, &psi_1cell(&eta(x)?)?)?;
            Ok(multifunctor_diff(&lhs, &identity_multifunctor(p)))
        })());
        record(&mut r, "psi-eta", &x.key(), (|| Ok(multifunctor_diff(&psi_1cell(&eta(x)?)?, &one_times_delta(x)?)))());
    }
    for f in &corpus.symmetric {
        record(&mut r, "psi-j", &f.name, (|| {
            let rhs = product_map(f, &identity_multifunctor(barratt_eccles(m.arity_bound())))?;
            Ok(multifunctor_diff(&psi_1cell(&include_j_unchecked(f))?, &rhs))
        })());
        record(&mut r, "pi-naturality", &f.name, (|| {
            let lhs = compose_multifunctor(&pi(n)?, &psi_1cell(&include_j_unchecked(f))?)?;
            let rhs = compose_multifunctor(f, &pi(m)?)?;
            Ok(multifunctor_diff(&lhs, &rhs))
        })());
    }
    r
}

/// `EΣ* -> T x EΣ*`, `s -> (*, s)`, an isomorphism.
pub fn be_to_terminal_times_be(n: usize) -> Result<MultiFunctor> {
    let be = barratt_eccles(n);
    pairing(&to_terminal(be.clone()), &identity_multifunctor(be))
}

/// Output of [`algebra_demo`].
pub struct AlgebraDemo {
    pub pseudo: PseudoSymMultiFunctor,
    pub pseudo_report: Report,
    pub rigidified: MultiFunctor,
    /// The rigidified algebra seen as `EΣ* -> End(Z/k)`.
    pub algebra: MultiFunctor,
    pub algebra_report: Report,
}

/// The pseudo symmetric algebra `T -> End(Z/k)` at the unit, rigidified and
/// restricted along `EΣ* = T x EΣ*` to a symmetric `EΣ*`-algebra.
pub fn algebra_demo(k: usize, n: usize) -> Result<AlgebraDemo> {
    let t = crate::construct::terminal_operad(n);
    let mon = FinCommMonoid::cyclic(k);
    let unit = mon.unit().clone();
    let end = end_of_monoid(mon, n)?;
    let f = crate::functors::thin_map(format!("Z/{k}"), t, end, move |_| Ok(unit.clone()), |_, _| Ok(Id::star()))?;
    let pseudo = PseudoSymMultiFunctor { underlying: f.clone(), iso: Arc::new(crate::pseudo::ForcedIso(f)) };
    let pseudo_report = check_pseudo(&pseudo);
    let rigidified = rigidify_unchecked(&pseudo)?;
    let mut algebra = compose_multifunctor(&rigidified, &be_to_terminal_times_be(n)?)?;
    algebra.name = format!("EΣ*-algebra Z/{k}");
    let algebra_report = check_multifunctor(&algebra);
    Ok(AlgebraDemo { pseudo, pseudo_report, rigidified, algebra, algebra_report })
}

/// `check_multinat` on `phi(theta)`; convenience for callers.
pub fn check_rigidified_nat(t: &PseudoSymMultiNatTrans) -> Result<Report> {
    Ok(check_multinat(&rigidify_nat_unchecked(t)?))
}
