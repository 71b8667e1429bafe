//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use multicoh::construct::{
    assoc_operad, barratt_eccles, delooping_operad, end_of_monoid, product_multicat, terminal_operad, weight_operad,
    FinCommMonoid,
};
use multicoh::fincat::{check_category, check_functor, check_nattrans, FinCat, FinFunctor, FinNatTrans, FunctorRef};
use multicoh::fixtures::{
    adjunction_corpora, collapse, composable_pairs, delooping_endomorphism, pseudo_fixtures, reversal, rigid_fixtures,
    weight_nat, weight_shift,
};
use multicoh::functors::{
    check_multifunctor, check_multinat, horiz_compose, identity_nat, materialize_functor,
    multifunctor_diff, multinat_equal, vert_compose, Component, MultiNatTrans,
};
use multicoh::multicat::{
    check_multicat, check_multicat_factored, check_multicat_factored_with, same_multicat, ActionFunctor, SignatureIndex,
    TableMulticategory,
};
use multicoh::mutate::{
    mutate_category, mutate_fin_functor, mutate_fin_nat, mutate_functor, mutate_multicat, mutate_nat, mutate_pseudo,
    mutate_pseudo_nat,
};
use multicoh::pseudo::{
    check_pseudo, check_pseudo_nat, compose_pseudo, identity_pseudo_nat, include_j_unchecked, materialize_pseudo,
    pseudo_diff, pseudo_horiz_compose, pseudo_nat_equal, pseudo_vert_compose, PseudoSymMultiFunctor,
    PseudoSymMultiNatTrans,
};
use multicoh::rigidify::{algebra_demo, check_adjunction, d_compose, eta, eta_star, rigidify_unchecked, Corpus};
use multicoh::{MultiRef, Multicategory, Report};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn z(k: usize) -> FinCommMonoid {
    FinCommMonoid::cyclic(k)
}

fn builders(n: usize) -> Vec<MultiRef> {
    vec![
        terminal_operad(n),
        assoc_operad(n),
        barratt_eccles(n),
        end_of_monoid(z(2), n).unwrap(),
        end_of_monoid(z(3), n).unwrap(),
        end_of_monoid(z(4), n).unwrap(),
    ]
}

fn first_failure(r: &Report) -> String {
    r.first_failure().unwrap_or_else(|| "?".into())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let bs = builders(4);
    let mut cache = HashMap::new();
    let mut bad = Vec::new();
    let mut count = 0;
    for b in &bs {
        let r = check_multicat_factored_with(b.as_ref(), &mut cache);
        count += 1;
        if !r.passed() {
            bad.push(format!("{}: {}", b.key(), first_failure(&r)));
        }
    }
    for a in &bs {
        for b in &bs {
            let p = product_multicat(a.clone(), b.clone()).unwrap();
            let r = check_multicat_factored_with(p.as_ref(), &mut cache);
            count += 1;
            if !r.passed() {
                bad.push(format!("{}: {}", p.key(), first_failure(&r)));
            }
        }
    }
    let elapsed = t.elapsed();

    // The factored check must agree with the direct one where the direct
    // one is affordable, on valid and on corrupted products.
    let mut disagree = Vec::new();
    let small = builders(3);
    let pairs: Vec<(MultiRef, MultiRef)> =
        small.iter().enumerate().flat_map(|(i, a)| small[i..].iter().map(move |b| (a.clone(), b.clone()))).collect();
    let agreements: Vec<Option<String>> = pairs
        .par_iter()
        .map(|(a, b)| {
            let p = product_multicat(a.clone(), b.clone()).unwrap();
            let (d, f) = (check_multicat(p.as_ref()).passed(), check_multicat_factored(p.as_ref()).passed());
            (d != f || !d).then(|| format!("{}: direct {d}, factored {f}", p.key()))
        })
        .collect();
    disagree.extend(agreements.into_iter().flatten());
    let mut rng = StdRng::seed_from_u64(11);
    let table = TableMulticategory::materialize(assoc_operad(2).as_ref()).unwrap();
    for _ in 0..5 {
        let m = mutate_multicat(&table, &mut rng);
        let p = product_multicat(Arc::new(m.value), end_of_monoid(z(2), 2).unwrap()).unwrap();
        let (d, f) = (check_multicat(p.as_ref()), check_multicat_factored(p.as_ref()));
        if d.passed() || f.passed() {
            disagree.push(format!("{}: direct {}, factored {}", m.site, d.passed(), f.passed()));
        }
    }
    if !bad.is_empty() || !disagree.is_empty() || elapsed > Duration::from_secs(120) {
        return Err(format!("failures {bad:?}; disagreements {disagree:?}; arity-4 time {elapsed:.1?}"));
    }
    Ok(format!(
        "{count} multicategories at arity 4 (6 builders, 36 ordered products, factored) in {elapsed:.1?}; \
         direct and factored agree on {} products at arity 3 and 5 corrupted products",
        pairs.len()
    ))
}

fn criterion_2() -> Outcome {
    let ms = [assoc_operad(3), barratt_eccles(3), end_of_monoid(z(3), 3).unwrap()];
    let mut lines = Vec::new();
    for m in &ms {
        let r = check_pseudo(&eta(m).map_err(|e| e.to_string())?);
        if !r.passed() {
            return Err(format!("eta({}): {}", m.key(), first_failure(&r)));
        }
        lines.push(format!("{} ({} instances)", m.key(), r.instances()));
    }
    Ok(format!("eta passes for {}", lines.join(", ")))
}

fn criterion_3(fixtures: &[PseudoSymMultiFunctor]) -> Outcome {
    let gs = rigid_fixtures(3).map_err(|e| e.to_string())?;
    let bad: Vec<String> = gs
        .par_iter()
        .filter_map(|g| {
            let e = match eta_star(g) {
                Ok(e) => e,
                Err(err) => return Some(format!("{}: {err}", g.name)),
            };
            let r = check_pseudo(&e);
            if !r.passed() {
                return Some(format!("eta*({}): {}", g.name, first_failure(&r)));
            }
            match rigidify_unchecked(&e).map(|h| multifunctor_diff(&h, g)) {
                Ok(None) => None,
                Ok(Some(d)) => Some(format!("phi eta* {}: {d}", g.name)),
                Err(err) => Some(format!("phi eta* {}: {err}", g.name)),
            }
        })
        .collect();
    if gs.len() < 50 || !bad.is_empty() {
        return Err(format!("{} generated, failures {bad:?}", gs.len()));
    }
    let bad: Vec<String> = fixtures
        .par_iter()
        .filter_map(|f| match rigidify_unchecked(f).and_then(|g| eta_star(&g)).map(|h| pseudo_diff(&h, f)) {
            Ok(None) => None,
            Ok(Some(d)) => Some(format!("{}: {d}", f.name())),
            Err(e) => Some(format!("{}: {e}", f.name())),
        })
        .collect();
    if !bad.is_empty() {
        return Err(format!("eta* phi failures {bad:?}"));
    }
    Ok(format!(
        "{} symmetric G: eta*(G) pseudo and phi(eta*(G)) = G; {} pseudo fixtures: eta*(phi(F)) = F with all isos",
        gs.len(),
        fixtures.len()
    ))
}

fn criterion_4(fixtures: &[PseudoSymMultiFunctor]) -> Outcome {
    let results: Vec<Result<u64, String>> = fixtures
        .par_iter()
        .map(|f| {
            let g = rigidify_unchecked(f).map_err(|e| format!("{}: {e}", f.name()))?;
            let r = check_multifunctor(&g);
            let sym = r.get("symmetric-action").map(|c| c.instances).unwrap_or(0);
            if !r.passed() {
                return Err(format!("phi({}): {}", f.name(), first_failure(&r)));
            }
            if sym == 0 {
                return Err(format!("phi({}): symmetric action not exercised", f.name()));
            }
            Ok(sym)
        })
        .collect();
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("phi(F) symmetric for all {} pseudo fixtures ({total} symmetric-action instances)", fixtures.len()))
}

fn criterion_5(fixtures: &[PseudoSymMultiFunctor]) -> Outcome {
    let corpora = adjunction_corpora(3).map_err(|e| e.to_string())?;
    let mut instances = 0;
    for (m, n, c) in &corpora {
        let r = check_adjunction(m, n, c);
        for axiom in ["triangle-eta", "triangle-pi", "psi-eta"] {
            if r.get(axiom).map(|a| a.instances).unwrap_or(0) == 0 {
                return Err(format!("{}: {axiom} not exercised", r.subject));
            }
        }
        if !r.passed() {
            return Err(format!("{}: {}", r.subject, first_failure(&r)));
        }
        instances += r.instances();
    }
    let psi_j: u64 = corpora.iter().map(|(_, _, c)| c.symmetric.len() as u64).sum();
    let pairs = composable_pairs(fixtures);
    let bad: Vec<String> = pairs
        .par_iter()
        .filter_map(|(f, g)| {
            let diff = compose_pseudo(g, f).and_then(|gf| {
                let lhs = rigidify_unchecked(&gf)?;
                let rhs = d_compose(&rigidify_unchecked(g)?, &rigidify_unchecked(f)?)?;
                Ok(multifunctor_diff(&lhs, &rhs))
            });
            match diff {
                Ok(None) => None,
                Ok(Some(d)) => Some(format!("{} then {}: {d}", f.name(), g.name())),
                Err(e) => Some(format!("{} then {}: {e}", f.name(), g.name())),
            }
        })
        .collect();
    if !bad.is_empty() {
        return Err(format!("d_compose failures {bad:?}"));
    }
    Ok(format!(
        "{} fixture pairs: triangles, psi(eta) = 1 x diagonal, psi(jF) = F x 1 on {psi_j} functors ({instances} instances); \
         phi(G F) = d_compose on {} composable pairs",
        corpora.len(),
        pairs.len()
    ))
}

/// Tally of a mutation sweep over one checker.
#[derive(Default)]
struct Sweep {
    fixtures: usize,
    mutations: usize,
    problems: Vec<String>,
}

const PER_FIXTURE: usize = 5;

/// Runs `PER_FIXTURE` seeded mutations of each fixture. Each fixture must
/// pass unmutated; each mutant must fail with a named axiom and a witness.
fn sweep<T: Sync>(
    checker: &str,
    fixtures: &[(String, T)],
    base: impl Fn(&T) -> Report + Sync,
    mutant: impl Fn(&T, &mut StdRng) -> Result<(String, Report), String> + Sync,
) -> Sweep {
    let per: Vec<(usize, Vec<String>)> = fixtures
        .par_iter()
        .enumerate()
        .map(|(i, (name, x))| {
            let mut problems = Vec::new();
            let r = base(x);
            if !r.passed() {
                problems.push(format!("{checker} {name}: fixture itself fails: {}", first_failure(&r)));
            }
            let mut rng = StdRng::seed_from_u64(0x5eed + i as u64);
            let mut done = 0;
            for _ in 0..PER_FIXTURE {
                match mutant(x, &mut rng) {
                    Ok((site, r)) => {
                        done += 1;
                        let named = r.checks.iter().any(|c| {
                            !c.passed() && !c.axiom.is_empty() && c.failures.first().is_some_and(|f| !f.witness.is_empty())
                        });
                        if r.passed() {
                            problems.push(format!("{checker} {name}: silent pass after {site}"));
                        } else if !named {
                            problems.push(format!("{checker} {name}: no axiom/witness after {site}"));
                        }
                    }
                    Err(e) => problems.push(format!("{checker} {name}: cannot mutate: {e}")),
                }
            }
            (done, problems)
        })
        .collect();
    let mut s = Sweep { fixtures: fixtures.len(), ..Sweep::default() };
    for (done, p) in per {
        s.mutations += done;
        s.problems.extend(p);
    }
    s
}

fn largest_homs(m: &dyn Multicategory) -> Vec<FinCat> {
    let idx = SignatureIndex::new(m).unwrap();
    let (_, hom) = idx.all.iter().max_by_key(|(s, h)| (h.morphisms().len(), s.arity())).unwrap();
    vec![FinCat::from_category(hom.as_ref()).unwrap()]
}

fn action_functor(m: &dyn Multicategory) -> FinFunctor {
    let idx = SignatureIndex::new(m).unwrap();
    let (sig, _) = idx.all.iter().filter(|(s, _)| s.arity() >= 2).max_by_key(|(s, h)| (h.morphisms().len(), s.arity())).unwrap();
    let a = ActionFunctor::new(m, sig.clone(), reversal(sig.arity())).unwrap();
    FinFunctor::from_functor(&a).unwrap()
}

fn criterion_6(fixtures: &[PseudoSymMultiFunctor]) -> Outcome {
    let n = 3;
    let mut sweeps: Vec<(&str, Sweep)> = Vec::new();

    let be = barratt_eccles(n);
    let b3 = delooping_operad(z(3), n);
    let abe = product_multicat(assoc_operad(n), be.clone()).unwrap();
    let cats: Vec<(String, FinCat)> = [be.clone(), b3.clone(), abe.clone(), weight_operad(z(3), n)]
        .iter()
        .flat_map(|m| largest_homs(m.as_ref()).into_iter().map(move |c| (m.key(), c)))
        .collect();
    sweeps.push((
        "check_category",
        sweep("check_category", &cats, |c| check_category(c), |c, rng| {
            let m = mutate_category(c, rng);
            Ok((m.site, check_category(&m.value)))
        }),
    ));

    let col = rigidify_unchecked(&collapse(n).unwrap()).unwrap();
    let times2 = delooping_endomorphism(&b3, &z(3), 2).unwrap();
    let sig_col = SignatureIndex::new(col.source.as_ref()).unwrap().all.iter().map(|(s, _)| s.clone()).max_by_key(|s| s.arity()).unwrap();
    let sig_b = SignatureIndex::new(b3.as_ref()).unwrap().all.iter().map(|(s, _)| s.clone()).max_by_key(|s| s.arity()).unwrap();
    let functors: Vec<(String, FinFunctor)> = vec![
        ("action on BE".into(), action_functor(be.as_ref())),
        ("action on B(Z/3)".into(), action_functor(b3.as_ref())),
        ("action on Ass x BE".into(), action_functor(abe.as_ref())),
        ("phi(collapse) component".into(), FinFunctor::from_functor(&Component::new(&col, sig_col).unwrap()).unwrap()),
        ("times2 component".into(), FinFunctor::from_functor(&Component::new(&times2, sig_b).unwrap()).unwrap()),
    ];
    sweeps.push((
        "check_functor",
        sweep("check_functor", &functors, |f| check_functor(f), |f, rng| {
            let m = mutate_fin_functor(f, rng);
            Ok((m.site, check_functor(&m.value)))
        }),
    ));
    // Hom categories of B(Z/3) are one-object commutative monoids, where every
    // component is natural; those functors get no transformation fixture.
    let w3 = weight_operad(z(3), n);
    let wbe = product_multicat(w3.clone(), be.clone()).unwrap();
    let nat_functors: Vec<(String, FinFunctor)> = functors
        .iter()
        .filter(|(name, _)| !name.contains("B(Z/3)") && !name.starts_with("times2"))
        .cloned()
        .chain([
            ("action on W(Z/3)".into(), action_functor(w3.as_ref())),
            ("action on W(Z/3) x BE".into(), action_functor(wbe.as_ref())),
        ])
        .collect();
    let nats: Vec<(String, FinNatTrans)> = nat_functors
        .iter()
        .map(|(name, f)| {
            let f: FunctorRef = Arc::new(f.clone());
            (format!("identity on {name}"), FinNatTrans::identity(f).unwrap())
        })
        .collect();
    sweeps.push((
        "check_nattrans",
        sweep("check_nattrans", &nats, |x| check_nattrans(x), |x, rng| {
            let m = mutate_fin_nat(x, rng);
            Ok((m.site, check_nattrans(&m.value)))
        }),
    ));

    let multicats: Vec<(String, TableMulticategory)> = [
        terminal_operad(n),
        assoc_operad(n),
        be.clone(),
        end_of_monoid(z(2), n).unwrap(),
        end_of_monoid(z(3), n).unwrap(),
        weight_operad(z(3), n),
        b3.clone(),
    ]
    .iter()
    .map(|m| (m.key(), TableMulticategory::materialize(m.as_ref()).unwrap()))
    .collect();
    sweeps.push((
        "check_multicat",
        sweep("check_multicat", &multicats, |m| check_multicat(m), |m, rng| {
            let x = mutate_multicat(m, rng);
            Ok((x.site, check_multicat(&x.value)))
        }),
    ));
    let small: Vec<(String, (TableMulticategory, MultiRef))> = [
        (assoc_operad(n), end_of_monoid(z(2), n).unwrap()),
        (end_of_monoid(z(3), n).unwrap(), be.clone()),
        (terminal_operad(n), b3.clone()),
    ]
    .into_iter()
    .map(|(a, b)| (format!("{} x {}", a.key(), b.key()), (TableMulticategory::materialize(a.as_ref()).unwrap(), b)))
    .collect();
    sweeps.push((
        "check_multicat_factored",
        sweep(
            "check_multicat_factored",
            &small,
            |(a, b)| check_multicat_factored(product_multicat(Arc::new(a.clone()), b.clone()).unwrap().as_ref()),
            |(a, b), rng| {
                let x = mutate_multicat(a, rng);
                let (l, r): (MultiRef, MultiRef) =
                    if rng.random_bool(0.5) { (Arc::new(x.value), b.clone()) } else { (b.clone(), Arc::new(x.value)) };
                let p = product_multicat(l, r).map_err(|e| e.to_string())?;
                Ok((x.site, check_multicat_factored(p.as_ref())))
            },
        ),
    ));

    let rigid: Vec<(String, _)> = rigid_fixtures(n).unwrap().into_iter().map(|g| (g.name.clone(), g)).collect();
    sweeps.push((
        "check_multifunctor",
        sweep("check_multifunctor", &rigid, check_multifunctor, |g, rng| {
            let m = mutate_functor(g, rng).map_err(|e| e.to_string())?;
            Ok((m.site, check_multifunctor(&m.value)))
        }),
    ));

    let tables: Vec<(String, PseudoSymMultiFunctor)> =
        fixtures.iter().map(|f| (f.name().to_string(), materialize_pseudo(f).unwrap().0)).collect();
    sweeps.push((
        "check_pseudo",
        sweep("check_pseudo", &tables, check_pseudo, |f, rng| {
            let m = mutate_pseudo(f, rng).map_err(|e| e.to_string())?;
            Ok((m.site, check_pseudo(&m.value)))
        }),
    ));

    let corpora = adjunction_corpora(n).unwrap();
    let mut mnats: Vec<(String, MultiNatTrans)> = Vec::new();
    let mut pnats: Vec<(String, PseudoSymMultiNatTrans)> = Vec::new();
    for (_, _, c) in &corpora {
        mnats.extend(c.rigid_nats.iter().map(|t| (t.name.clone(), t.clone())));
        pnats.extend(c.pseudo_nats.iter().map(|t| (t.name.clone(), t.clone())));
    }
    for (_, g) in rigid.iter().step_by(7) {
        mnats.push((format!("1_{}", g.name), identity_nat(&materialize_functor(g).unwrap()).unwrap()));
    }
    for (name, f) in &tables {
        pnats.push((format!("1_{name}"), identity_pseudo_nat(f).unwrap()));
    }
    sweeps.push((
        "check_multinat",
        sweep("check_multinat", &mnats, check_multinat, |t, rng| {
            let m = mutate_nat(t, rng).map_err(|e| e.to_string())?;
            Ok((m.site, check_multinat(&m.value)))
        }),
    ));
    sweeps.push((
        "check_pseudo_nat",
        sweep("check_pseudo_nat", &pnats, check_pseudo_nat, |t, rng| {
            let m = mutate_pseudo_nat(t, rng).map_err(|e| e.to_string())?;
            Ok((m.site, check_pseudo_nat(&m.value)))
        }),
    ));

    let adj: Vec<(String, (MultiRef, MultiRef, Corpus))> = corpora
        .into_iter()
        .map(|(m, n, c)| (format!("{} -> {}", m.key(), n.key()), (m, n, c)))
        .collect();
    sweeps.push((
        "check_adjunction",
        sweep("check_adjunction", &adj, |(m, n, c)| check_adjunction(m, n, c), |(m, n, c), rng| {
            let mut c = c.clone();
            let mut kinds = vec![0, 1];
            if !c.pseudo_nats.is_empty() {
                kinds.extend([2, 3]);
            }
            let site = match kinds[rng.random_range(0..kinds.len())] {
                0 => {
                    let i = rng.random_range(0..c.pseudo.len());
                    let f = materialize_pseudo(&c.pseudo[i]).map_err(|e| e.to_string())?.0;
                    let x = mutate_pseudo(&f, rng).map_err(|e| e.to_string())?;
                    c.pseudo[i] = x.value;
                    format!("pseudo {}: {}", f.name(), x.site)
                }
                1 => {
                    let i = rng.random_range(0..c.rigid.len());
                    let x = mutate_functor(&c.rigid[i], rng).map_err(|e| e.to_string())?;
                    c.rigid[i] = x.value;
                    format!("rigid {}: {}", c.rigid[i].name, x.site)
                }
                2 => {
                    let i = rng.random_range(0..c.pseudo_nats.len());
                    let x = mutate_pseudo_nat(&c.pseudo_nats[i], rng).map_err(|e| e.to_string())?;
                    c.pseudo_nats[i] = x.value;
                    format!("pseudo transformation {}: {}", c.pseudo_nats[i].name, x.site)
                }
                _ => {
                    let i = rng.random_range(0..c.rigid_nats.len());
                    let x = mutate_nat(&c.rigid_nats[i], rng).map_err(|e| e.to_string())?;
                    c.rigid_nats[i] = x.value;
                    format!("transformation {}: {}", c.rigid_nats[i].name, x.site)
                }
            };
            Ok((site, check_adjunction(m, n, &c)))
        }),
    ));

    let problems: Vec<&String> = sweeps.iter().flat_map(|(_, s)| &s.problems).collect();
    let summary: Vec<String> =
        sweeps.iter().map(|(c, s)| format!("{c} {}/{}x{}", s.mutations, s.fixtures, PER_FIXTURE)).collect();
    if !problems.is_empty() {
        return Err(format!("{} problems, first: {:?}; {}", problems.len(), &problems[..problems.len().min(5)], summary.join(", ")));
    }
    Ok(format!("all mutants detected with axiom and witness: {}", summary.join(", ")))
}

fn criterion_7() -> Outcome {
    let d = algebra_demo(3, 3).map_err(|e| e.to_string())?;
    if !d.pseudo_report.passed() {
        return Err(format!("pseudo algebra: {}", first_failure(&d.pseudo_report)));
    }
    if !same_multicat(&d.algebra.source, &barratt_eccles(3)) {
        return Err(format!("algebra source is {}", d.algebra.source.key()));
    }
    if !d.algebra_report.passed() {
        return Err(format!("rigidified algebra: {}", first_failure(&d.algebra_report)));
    }
    Ok(format!(
        "{} -> {} passes check_multifunctor ({} instances)",
        d.algebra.source.key(),
        d.algebra.target.key(),
        d.algebra_report.instances()
    ))
}

fn criterion_8() -> Outcome {
    let n = 3;
    let mon = z(3);
    let w = weight_operad(mon.clone(), n);
    // theta[h][c][c2]: shift(h, c) => shift(h, c2)
    let nat = |h: usize, c: usize, c2: usize| weight_nat(&w, &mon, h, c, c2).unwrap();
    let ids: Vec<MultiNatTrans> = (0..3).flat_map(|h| (0..3).map(move |c| (h, c))).map(|(h, c)| identity_nat(&weight_shift(&w, &mon, h, c).unwrap()).unwrap()).collect();
    let mut laws = 0u64;
    let mut bad = Vec::new();
    let mut law = |ok: bool, what: String| {
        laws += 1;
        if !ok {
            bad.push(what);
        }
    };
    for h in 0..3 {
        for (a, b, c, d) in (0..81).map(|i| (i % 3, i / 3 % 3, i / 9 % 3, i / 27)) {
            let (t1, t2, t3) = (nat(h, a, b), nat(h, b, c), nat(h, c, d));
            let v = vert_compose(&t2, &t1).unwrap();
            law(check_multinat(&v).passed(), format!("vert closed {h} {a}{b}{c}"));
            let id_a = identity_nat(&t1.source).unwrap();
            law(multinat_equal(&vert_compose(&t1, &id_a).unwrap(), &t1), format!("vert unit {h} {a}{b}"));
            let l = vert_compose(&t3, &vert_compose(&t2, &t1).unwrap()).unwrap();
            let r = vert_compose(&vert_compose(&t3, &t2).unwrap(), &t1).unwrap();
            law(multinat_equal(&l, &r), format!("vert assoc {h} {a}{b}{c}{d}"));
        }
    }
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..60 {
        let mut pick = || (rng.random_range(0..3), rng.random_range(0..3), rng.random_range(0..3), rng.random_range(0..3));
        let (h, a, b, c) = pick();
        let (h2, a2, b2, c2) = pick();
        let (th, th2) = (nat(h, a, b), nat(h, b, c));
        let (ze, ze2) = (nat(h2, a2, b2), nat(h2, b2, c2));
        let hz = horiz_compose(&ze, &th).unwrap();
        law(check_multinat(&hz).passed(), format!("horiz closed {h}{a}{b} {h2}{a2}{b2}"));
        let lhs = horiz_compose(&vert_compose(&ze2, &ze).unwrap(), &vert_compose(&th2, &th).unwrap()).unwrap();
        let rhs = vert_compose(&horiz_compose(&ze2, &th2).unwrap(), &hz).unwrap();
        law(multinat_equal(&lhs, &rhs), format!("interchange {h}{a}{b}{c} {h2}{a2}{b2}{c2}"));
        let id_w = identity_nat(&multicoh::functors::identity_multifunctor(w.clone())).unwrap();
        law(multinat_equal(&horiz_compose(&id_w, &th).unwrap(), &th), format!("horiz left unit {h}{a}{b}"));
        law(multinat_equal(&horiz_compose(&th, &id_w).unwrap(), &th), format!("horiz right unit {h}{a}{b}"));
        let (h3, a3, b3, _) = pick();
        let xi = nat(h3, a3, b3);
        let l = horiz_compose(&xi, &horiz_compose(&ze, &th).unwrap()).unwrap();
        let r = horiz_compose(&horiz_compose(&xi, &ze).unwrap(), &th).unwrap();
        law(multinat_equal(&l, &r), format!("horiz assoc {h}{a}{b} {h2}{a2}{b2} {h3}{a3}{b3}"));
    }
    for i in &ids {
        law(multinat_equal(&vert_compose(i, i).unwrap(), i), format!("identity idempotent {}", i.name));
    }

    // Pseudo symmetric transformations: the weight corpus through j, and
    // identities on non-strict pseudo fixtures composed horizontally.
    let pj = |t: &MultiNatTrans| PseudoSymMultiNatTrans {
        name: t.name.clone(),
        source: include_j_unchecked(&t.source),
        target: include_j_unchecked(&t.target),
        components: t.components.clone(),
    };
    for _ in 0..40 {
        let mut pick = || (rng.random_range(0..3), rng.random_range(0..3), rng.random_range(0..3), rng.random_range(0..3));
        let (h, a, b, c) = pick();
        let (h2, a2, b2, c2) = pick();
        let (th, th2) = (pj(&nat(h, a, b)), pj(&nat(h, b, c)));
        let (ze, ze2) = (pj(&nat(h2, a2, b2)), pj(&nat(h2, b2, c2)));
        let v = pseudo_vert_compose(&th2, &th).unwrap();
        law(check_pseudo_nat(&v).passed(), format!("pseudo vert closed {h}{a}{b}{c}"));
        let hz = pseudo_horiz_compose(&ze, &th).unwrap();
        law(check_pseudo_nat(&hz).passed(), "pseudo horiz closed".into());
        let lhs = pseudo_horiz_compose(&pseudo_vert_compose(&ze2, &ze).unwrap(), &v).unwrap();
        let rhs = pseudo_vert_compose(&pseudo_horiz_compose(&ze2, &th2).unwrap(), &hz).unwrap();
        law(pseudo_nat_equal(&lhs, &rhs), format!("pseudo interchange {h}{a}{b}{c} {h2}{a2}{b2}{c2}"));
        let id = identity_pseudo_nat(&th.source).unwrap();
        law(pseudo_nat_equal(&pseudo_vert_compose(&th, &id).unwrap(), &th), "pseudo vert unit".into());
        let d3 = pick().3;
        let t3 = pj(&nat(h, c, d3));
        let l = pseudo_vert_compose(&t3, &pseudo_vert_compose(&th2, &th).unwrap()).unwrap();
        let r = pseudo_vert_compose(&pseudo_vert_compose(&t3, &th2).unwrap(), &th).unwrap();
        law(pseudo_nat_equal(&l, &r), "pseudo vert assoc".into());
    }
    let fixtures = pseudo_fixtures(n).unwrap();
    let pairs = composable_pairs(&fixtures);
    for (f, g) in &pairs {
        let (i_f, i_g) = (identity_pseudo_nat(f).unwrap(), identity_pseudo_nat(g).unwrap());
        let gf = compose_pseudo(g, f).unwrap();
        let hz = pseudo_horiz_compose(&i_g, &i_f).unwrap();
        law(pseudo_nat_equal(&hz, &identity_pseudo_nat(&gf).unwrap()), format!("1_G * 1_F = 1_GF for {} {}", f.name(), g.name()));
        law(check_pseudo_nat(&hz).passed(), format!("pseudo horiz closed {} {}", f.name(), g.name()));
    }
    if !bad.is_empty() {
        return Err(format!("{} of {laws} laws fail: {:?}", bad.len(), &bad[..bad.len().min(5)]));
    }
    Ok(format!("{laws} unit, associativity, interchange and closure instances hold (strict and pseudo)"))
}

fn main() {
    let t = Instant::now();
    let fixtures = pseudo_fixtures(3).expect("pseudo fixtures build");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("multicategory checks at arity 4", Box::new(criterion_1)),
        ("eta is pseudo symmetric", Box::new(criterion_2)),
        ("rigidification round trip", Box::new(|| criterion_3(&fixtures))),
        ("phi(F) is symmetric", Box::new(|| criterion_4(&fixtures))),
        ("2-adjunction identities", Box::new(|| criterion_5(&fixtures))),
        ("mutation sensitivity", Box::new(|| criterion_6(&fixtures))),
        ("algebra demo", Box::new(criterion_7)),
        ("2-category laws", Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {title}: {detail} ({elapsed:.1?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {title}: {detail} ({elapsed:.1?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass ({:.1?})", criteria.len() - failed, criteria.len(), t.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
