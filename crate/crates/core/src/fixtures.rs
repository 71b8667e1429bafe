//! Generated cells used by the test corpora, the demos and the CLI.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::construct::{
    assoc_operad, barratt_eccles, delooping_operad, end_of_monoid, terminal_operad, weight_operad, FinCommMonoid,
};
use crate::error::{Error, Result};
use crate::functors::{
    compose_multifunctor, from_fn, identity_multifunctor, monoid_hom_functor, pairing, projection, thin_map,
    MultiFunctor, MultiNatTrans, Side,
};
use crate::id::Id;
use crate::multicat::{same_multicat, Level, MultiRef};
use crate::perm::Perm;
use crate::pseudo::{compose_pseudo, include_j_unchecked, ForcedIso, PseudoSymMultiFunctor, PseudoSymMultiNatTrans};
use crate::rigidify::{eta, pi, rigidify_unchecked, with_be, Corpus};

pub fn reversal(n: usize) -> Perm {
    Perm::from_zero_based(&(0..n).rev().collect::<Vec<_>>()).unwrap()
}

/// `h x + c` in a monoid, `h` a repetition count and `c` possibly inverted.
fn affine(mon: &FinCommMonoid, h: usize, x: &Id, c: &Id, copies: isize) -> Result<Id> {
    let hx = mon.times(h, x)?;
    let cc = if copies >= 0 {
        mon.times(copies as usize, c)?
    } else {
        let inv = mon.inverse(c).ok_or_else(|| Error::InvalidMonoid(format!("{c} has no inverse")))?;
        mon.times((-copies) as usize, &inv)?
    };
    mon.op(&hx, &cc)
}

/// On the weight operad: `a -> h a + (n - 1) c` on arity `n` operations.
pub fn weight_shift(w: &MultiRef, mon: &FinCommMonoid, h: usize, c: usize) -> Result<MultiFunctor> {
    let cv = mon.elements()[c].clone();
    let m2 = mon.clone();
    thin_map(format!("shift({h},{c})[{}]", w.key()), w.clone(), w.clone(), |a| Ok(a.clone()), move |sig, x| {
        affine(&m2, h, x, &cv, sig.arity() as isize - 1)
    })
}

/// The transformation `shift(h,c) => shift(h,c')`, with component `c - c'`.
pub fn weight_nat(w: &MultiRef, mon: &FinCommMonoid, h: usize, c: usize, c2: usize) -> Result<MultiNatTrans> {
    let diff = affine(mon, 1, &mon.elements()[c], &mon.elements()[c2], -1)?;
    Ok(MultiNatTrans {
        name: format!("t({h};{c},{c2})"),
        source: weight_shift(w, mon, h, c)?,
        target: weight_shift(w, mon, h, c2)?,
        components: BTreeMap::from([(Id::star(), diff)]),
    })
}

/// `x -> h x` on objects of `End(A)`.
pub fn end_endomorphism(e: &MultiRef, mon: &FinCommMonoid, h: usize) -> Result<MultiFunctor> {
    let table: HashMap<Id, Id> = mon.elements().iter().map(|a| Ok((a.clone(), mon.times(h, a)?))).collect::<Result<_>>()?;
    monoid_hom_functor(&format!("times{h}[{}]", e.key()), e.clone(), e.clone(), table)
}

/// `alpha -> h alpha` on 2-cells of the delooping operad.
pub fn delooping_endomorphism(b: &MultiRef, mon: &FinCommMonoid, h: usize) -> Result<MultiFunctor> {
    let m2 = mon.clone();
    from_fn(format!("times{h}[{}]", b.key()), b.clone(), b.clone(), |a| Ok(a.clone()), move |_, x, level| match level {
        Level::Obj => Ok(x.clone()),
        Level::Mor => m2.times(h, x),
    })
}

/// The pseudo symmetric multifunctor with underlying data `f` and the
/// unique symmetry 2-cells of a thin target.
pub fn forced(f: MultiFunctor) -> PseudoSymMultiFunctor {
    PseudoSymMultiFunctor { underlying: f.clone(), iso: Arc::new(ForcedIso(f)) }
}

/// `Ass -> EΣ*`, every operation to the identity permutation.
pub fn collapse(n: usize) -> Result<PseudoSymMultiFunctor> {
    let f = thin_map("collapse", assoc_operad(n), barratt_eccles(n), |a| Ok(a.clone()), |sig, _| {
        Ok(Id::Perm(Perm::identity(sig.arity())))
    })?;
    Ok(forced(f))
}

/// `Ass -> EΣ*`, every operation to the reversal.
pub fn reverse_all(n: usize) -> Result<PseudoSymMultiFunctor> {
    let f = thin_map("reverse-all", assoc_operad(n), barratt_eccles(n), |a| Ok(a.clone()), |sig, _| {
        Ok(Id::Perm(reversal(sig.arity())))
    })?;
    Ok(forced(f))
}

/// Pseudo symmetric algebras of the terminal operad in `EΣ*`: the identity
/// or the reversal in each arity.
pub fn terminal_algebra(n: usize, reverse: bool) -> Result<PseudoSymMultiFunctor> {
    let name = if reverse { "T-reverse" } else { "T-identity" };
    let f = thin_map(name, terminal_operad(n), barratt_eccles(n), |a| Ok(a.clone()), move |sig, _| {
        let k = sig.arity();
        Ok(Id::Perm(if reverse { reversal(k) } else { Perm::identity(k) }))
    })?;
    Ok(forced(f))
}

/// The symmetric inclusion `Ass -> EΣ*`.
pub fn assoc_inclusion(n: usize) -> Result<MultiFunctor> {
    thin_map("incl", assoc_operad(n), barratt_eccles(n), |a| Ok(a.clone()), |_, x| Ok(x.clone()))
}

/// The pseudo symmetric algebra `T -> End(Z/k)` at the unit.
pub fn monoid_algebra(k: usize, n: usize) -> Result<PseudoSymMultiFunctor> {
    let mon = FinCommMonoid::cyclic(k);
    let unit = mon.unit().clone();
    let f = thin_map(format!("Z/{k}-algebra"), terminal_operad(n), end_of_monoid(mon, n)?, move |_| Ok(unit.clone()), |_, _| {
        Ok(Id::star())
    })?;
    Ok(forced(f))
}

/// Every pseudo symmetric fixture at arity bound `n`.
pub fn pseudo_fixtures(n: usize) -> Result<Vec<PseudoSymMultiFunctor>> {
    let z3 = FinCommMonoid::cyclic(3);
    let w = weight_operad(z3.clone(), n);
    let e = end_of_monoid(z3.clone(), n)?;
    let b = delooping_operad(z3.clone(), n);
    let mut out = Vec::new();
    for m in [assoc_operad(n), barratt_eccles(n), e.clone(), w.clone(), b.clone(), terminal_operad(n)] {
        out.push(eta(&m)?);
    }
    let col = collapse(n)?;
    out.push(col.clone());
    out.push(reverse_all(n)?);
    out.push(terminal_algebra(n, false)?);
    out.push(terminal_algebra(n, true)?);
    out.push(monoid_algebra(3, n)?);
    out.push(include_j_unchecked(&weight_shift(&w, &z3, 2, 1)?));
    out.push(include_j_unchecked(&end_endomorphism(&e, &z3, 2)?));
    out.push(include_j_unchecked(&delooping_endomorphism(&b, &z3, 2)?));
    out.push(include_j_unchecked(&pi(&assoc_operad(n))?));
    out.push(include_j_unchecked(&assoc_inclusion(n)?));
    out.push(compose_pseudo(&eta(&barratt_eccles(n))?, &col)?);
    out.push(compose_pseudo(&col, &include_j_unchecked(&pi(&assoc_operad(n))?))?);
    out.push(eta(&with_be(&assoc_operad(n))?)?);
    Ok(out)
}

/// Pairs `(F, G)` of pseudo fixtures with `G` composable after `F`.
pub fn composable_pairs(fs: &[PseudoSymMultiFunctor]) -> Vec<(PseudoSymMultiFunctor, PseudoSymMultiFunctor)> {
    let mut out = Vec::new();
    for f in fs {
        for g in fs {
            if same_multicat(f.target(), g.source()) {
                out.push((f.clone(), g.clone()));
            }
        }
    }
    out
}

/// Symmetric multifunctors `M x EΣ* -> N` built from the builders.
pub fn rigid_fixtures(n: usize) -> Result<Vec<MultiFunctor>> {
    let mut out = Vec::new();
    for k in [3, 4, 5] {
        let mon = FinCommMonoid::cyclic(k);
        let w = weight_operad(mon.clone(), n);
        let p = pi(&w)?;
        let right = projection(&with_be(&w)?, Side::Right)?;
        for h in 0..k {
            for c in 0..k {
                let g = compose_multifunctor(&weight_shift(&w, &mon, h, c)?, &p)?;
                if k == 3 {
                    out.push(pairing(&g, &right)?);
                }
                out.push(g);
            }
        }
    }
    let a = assoc_operad(n);
    out.push(projection(&with_be(&a)?, Side::Right)?);
    out.push(compose_multifunctor(&assoc_inclusion(n)?, &pi(&a)?)?);
    for f in [collapse(n)?, reverse_all(n)?, terminal_algebra(n, true)?, terminal_algebra(n, false)?] {
        out.push(rigidify_unchecked(&f)?);
    }
    let z3 = FinCommMonoid::cyclic(3);
    let e = end_of_monoid(z3.clone(), n)?;
    for h in 0..3 {
        out.push(compose_multifunctor(&end_endomorphism(&e, &z3, h)?, &pi(&e)?)?);
    }
    let b = delooping_operad(z3.clone(), n);
    for h in 0..3 {
        out.push(compose_multifunctor(&delooping_endomorphism(&b, &z3, h)?, &pi(&b)?)?);
    }
    Ok(out)
}

/// `(M, N, corpus)` triples for the adjunction check.
pub fn adjunction_corpora(n: usize) -> Result<Vec<(MultiRef, MultiRef, Corpus)>> {
    let z3 = FinCommMonoid::cyclic(3);
    let mut out = Vec::new();

    let w = weight_operad(z3.clone(), n);
    let mut c = Corpus::default();
    for h in 0..3 {
        for k in 0..3 {
            let f = weight_shift(&w, &z3, h, k)?;
            c.pseudo.push(include_j_unchecked(&f));
            c.rigid.push(compose_multifunctor(&f, &pi(&w)?)?);
            c.symmetric.push(f);
            for k2 in 0..3 {
                let t = weight_nat(&w, &z3, h, k, k2)?;
                c.pseudo_nats.push(PseudoSymMultiNatTrans {
                    name: t.name.clone(),
                    source: include_j_unchecked(&t.source),
                    target: include_j_unchecked(&t.target),
                    components: t.components.clone(),
                });
                c.rigid_nats.push(MultiNatTrans {
                    name: format!("{}.pi", t.name),
                    source: compose_multifunctor(&t.source, &pi(&w)?)?,
                    target: compose_multifunctor(&t.target, &pi(&w)?)?,
                    components: BTreeMap::from([(Id::pair(Id::star(), Id::star()), t.components[&Id::star()].clone())]),
                });
            }
        }
    }
    out.push((w.clone(), w, c));

    let a = assoc_operad(n);
    let be = barratt_eccles(n);
    let mut c = Corpus::default();
    c.pseudo = vec![collapse(n)?, reverse_all(n)?, include_j_unchecked(&assoc_inclusion(n)?)];
    c.rigid = vec![projection(&with_be(&a)?, Side::Right)?];
    c.rigid.extend(c.pseudo.iter().map(rigidify_unchecked).collect::<Result<Vec<_>>>()?);
    c.symmetric = vec![assoc_inclusion(n)?];
    out.push((a, be, c));

    let e = end_of_monoid(z3.clone(), n)?;
    let mut c = Corpus::default();
    for h in 0..3 {
        let f = end_endomorphism(&e, &z3, h)?;
        c.pseudo.push(include_j_unchecked(&f));
        c.rigid.push(compose_multifunctor(&f, &pi(&e)?)?);
        c.symmetric.push(f);
    }
    out.push((e.clone(), e.clone(), c));

    let t = terminal_operad(n);
    let alg = monoid_algebra(3, n)?;
    let c = Corpus {
        rigid: vec![rigidify_unchecked(&alg)?],
        symmetric: vec![alg.underlying.clone()],
        pseudo: vec![alg],
        ..Corpus::default()
    };
    out.push((t.clone(), e, c));

    let c = Corpus {
        pseudo: vec![terminal_algebra(n, false)?, terminal_algebra(n, true)?],
        rigid: vec![rigidify_unchecked(&terminal_algebra(n, true)?)?],
        ..Corpus::default()
    };
    out.push((t, barratt_eccles(n), c));

    let b = delooping_operad(z3.clone(), n);
    let mut c = Corpus::default();
    for h in 0..3 {
        let f = delooping_endomorphism(&b, &z3, h)?;
        c.pseudo.push(include_j_unchecked(&f));
        c.rigid.push(compose_multifunctor(&f, &pi(&b)?)?);
        c.symmetric.push(f);
    }
    let id = identity_multifunctor(b.clone());
    c.rigid_nats.push(crate::functors::identity_nat(&compose_multifunctor(&id, &pi(&b)?)?)?);
    out.push((b.clone(), b, c));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functors::{check_multifunctor, check_multinat};
    use crate::pseudo::check_pseudo;

    #[test]
    fn reversal_is_an_involution() {
        let w = reversal(4);
        assert_eq!(w.images(), vec![4, 3, 2, 1]);
        assert!(w.compose(&w).unwrap().is_identity());
    }

    #[test]
    fn weight_nats_are_valid() {
        let z = FinCommMonoid::cyclic(4);
        let w = weight_operad(z.clone(), 3);
        for (h, c, c2) in [(1, 3, 0), (2, 1, 2), (0, 0, 3)] {
            let t = weight_nat(&w, &z, h, c, c2).unwrap();
            assert!(check_multinat(&t).passed());
        }
    }

    #[test]
    fn small_fixtures_pass() {
        for f in pseudo_fixtures(2).unwrap() {
            let r = check_pseudo(&f);
            assert!(r.passed(), "{r}");
        }
        for g in rigid_fixtures(2).unwrap().iter().take(12) {
            assert!(check_multifunctor(g).passed(), "{}", g.name);
        }
    }
}
