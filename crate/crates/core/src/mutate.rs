//! Seeded single-entry corruption of tabulated structures. Used to show
//! that every checker notices a change to any one table entry.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::error::Result;
use crate::fincat::{Category, FinCat, FinFunctor, FinNatTrans, Functor, NatTrans};
use crate::functors::{MultiFunctor, MultiNatTrans, TableMap};
use crate::id::Id;
use crate::multicat::{show_ids, show_sigs, Level, MultiRef, Signature, TableMulticategory};
use crate::pseudo::{PseudoSymMultiFunctor, PseudoSymMultiNatTrans, TableIso};

/// A corrupted copy and a description of the changed entry.
#[derive(Debug, Clone)]
pub struct Mutant<T> {
    pub value: T,
    pub site: String,
}

/// A value different from `current`: another candidate of the right type
/// when there is one, a foreign id otherwise.
fn replacement(candidates: &[Id], current: &Id, rng: &mut impl Rng) -> Id {
    let others: Vec<&Id> = candidates.iter().filter(|c| *c != current).collect();
    match others.choose(rng) {
        Some(c) => (*c).clone(),
        None => Id::name("mutant"),
    }
}

fn level_name(level: Level) -> &'static str {
    match level {
        Level::Obj => "1-cell",
        Level::Mor => "2-cell",
    }
}

fn hom_ids(m: &dyn crate::multicat::Multicategory, sig: &Signature, level: Level) -> Vec<Id> {
    m.hom(sig).map(|h| level.ids(h.as_ref()).to_vec()).unwrap_or_default()
}

/// Changes one unit, action, composite or hom-category entry.
pub fn mutate_multicat(t: &TableMulticategory, rng: &mut impl Rng) -> Mutant<TableMulticategory> {
    let mut out = t.clone();
    out.name = format!("{}~", t.name);
    loop {
        match rng.random_range(0..4) {
            0 if !t.units.is_empty() => {
                let keys: Vec<&Id> = t.units.keys().collect();
                let a = (*keys.choose(rng).unwrap()).clone();
                let cur = t.units[&a].clone();
                let v = replacement(&hom_ids(t, &Signature::unary(a.clone()), Level::Obj), &cur, rng);
                out.units.insert(a.clone(), v.clone());
                return Mutant { value: out, site: format!("unit of {a}: {cur} -> {v}") };
            }
            1 => {
                let mut keys: Vec<(&(Signature, crate::perm::Perm), Level, &Vec<Id>)> = Vec::new();
                for (k, tables) in &t.actions {
                    for level in [Level::Obj, Level::Mor] {
                        for x in tables_level(tables, level).keys() {
                            keys.push((k, level, x));
                        }
                    }
                }
                if keys.is_empty() {
                    continue;
                }
                keys.sort();
                let &((sig, sigma), level, x) = keys.choose(rng).unwrap();
                let cur = tables_level(&t.actions[&(sig.clone(), sigma.clone())], level)[x].clone();
                let v = replacement(&hom_ids(t, &sig.act(sigma).unwrap(), level), &cur, rng);
                out.set_action(sig.clone(), sigma.clone(), x[0].clone(), level, v.clone());
                return Mutant {
                    value: out,
                    site: format!("action {sig} sigma={sigma} on {} {}: {cur} -> {v}", level_name(level), x[0]),
                };
            }
            2 => {
                let mut keys: Vec<(&(Signature, Vec<Signature>), Level, &Vec<Id>)> = Vec::new();
                for (k, tables) in &t.gammas {
                    for level in [Level::Obj, Level::Mor] {
                        for x in tables_level(tables, level).keys() {
                            keys.push((k, level, x));
                        }
                    }
                }
                if keys.is_empty() {
                    continue;
                }
                keys.sort();
                let &((outer, inners), level, args) = keys.choose(rng).unwrap();
                let cur = tables_level(&t.gammas[&(outer.clone(), inners.clone())], level)[args].clone();
                let mid = Signature::compose(outer, inners).unwrap();
                let v = replacement(&hom_ids(t, &mid, level), &cur, rng);
                out.set_gamma(outer.clone(), inners.clone(), args.clone(), level, v.clone());
                return Mutant {
                    value: out,
                    site: format!(
                        "gamma {outer} [{}] on {} ({}): {cur} -> {v}",
                        show_sigs(inners),
                        level_name(level),
                        show_ids(args)
                    ),
                };
            }
            3 => {
                let sigs: Vec<&Signature> =
                    t.homs.iter().filter(|(_, h)| !h.composite_table().is_empty()).map(|(s, _)| s).collect();
                let Some(&sig) = sigs.choose(rng) else { continue };
                let hom = &t.homs[sig];
                let table = hom.composite_table();
                let keys: Vec<&(Id, Id)> = table.keys().collect();
                let (g, f) = (*keys.choose(rng).unwrap()).clone();
                let cur = table[&(g.clone(), f.clone())].clone();
                let v = replacement(hom.morphisms(), &cur, rng);
                let mut h = (**hom).clone();
                h.set_composite(g.clone(), f.clone(), v.clone());
                out.homs.insert(sig.clone(), Arc::new(h));
                return Mutant { value: out, site: format!("composite {g} . {f} in {sig}: {cur} -> {v}") };
            }
            _ => {}
        }
    }
}

fn tables_level(t: &crate::multicat::LevelTables, level: Level) -> &std::collections::HashMap<Vec<Id>, Id> {
    match level {
        Level::Obj => &t.obj,
        Level::Mor => &t.mor,
    }
}

fn mutate_table_map(
    target: &MultiRef,
    map: &TableMap,
    rng: &mut impl Rng,
    with_objects: bool,
) -> Result<(TableMap, String)> {
    let mut out = map.clone();
    if with_objects && rng.random_range(0..4) == 0 {
        let keys: Vec<&Id> = map.objects.keys().collect();
        let a = (*keys.choose(rng).unwrap()).clone();
        let cur = map.objects[&a].clone();
        let v = replacement(target.objects(), &cur, rng);
        out.objects.insert(a.clone(), v.clone());
        return Ok((out, format!("object map at {a}: {cur} -> {v}")));
    }
    let mut sites: Vec<(&Signature, Level, &Id)> = Vec::new();
    for (sig, (o, m)) in &map.cells {
        sites.extend(o.keys().map(|x| (sig, Level::Obj, x)));
        sites.extend(m.keys().map(|x| (sig, Level::Mor, x)));
    }
    let &(sig, level, x) = sites.choose(rng).expect("empty functor table");
    let (o, m) = &map.cells[sig];
    let cur = if level == Level::Obj { o[x].clone() } else { m[x].clone() };
    let image = {
        let inputs = sig.inputs.iter().map(|a| map.objects.get(a).cloned().unwrap_or_else(|| a.clone())).collect();
        let output = map.objects.get(&sig.output).cloned().unwrap_or_else(|| sig.output.clone());
        Signature::new(inputs, output)
    };
    let v = replacement(&hom_ids(target.as_ref(), &image, level), &cur, rng);
    out.set(sig.clone(), x.clone(), level, v.clone());
    Ok((out, format!("image of {} {x} in {sig}: {cur} -> {v}", level_name(level))))
}

/// Changes one entry of the object map or of a component functor.
pub fn mutate_functor(f: &MultiFunctor, rng: &mut impl Rng) -> Result<Mutant<MultiFunctor>> {
    let table = crate::functors::tabulate(f)?;
    let (map, site) = mutate_table_map(&f.target, &table, rng, true)?;
    Ok(Mutant { value: MultiFunctor { map: Arc::new(map), ..f.clone() }, site })
}

fn mutate_components(
    comps: &BTreeMap<Id, Id>,
    source: &MultiFunctor,
    target: &MultiFunctor,
    rng: &mut impl Rng,
) -> Result<(BTreeMap<Id, Id>, String)> {
    let keys: Vec<&Id> = comps.keys().collect();
    let a = (*keys.choose(rng).expect("no components")).clone();
    let cur = comps[&a].clone();
    let sig = Signature::new(vec![source.object(&a)?], target.object(&a)?);
    let v = replacement(&hom_ids(source.target.as_ref(), &sig, Level::Obj), &cur, rng);
    let mut out = comps.clone();
    out.insert(a.clone(), v.clone());
    Ok((out, format!("component at {a}: {cur} -> {v}")))
}

pub fn mutate_nat(t: &MultiNatTrans, rng: &mut impl Rng) -> Result<Mutant<MultiNatTrans>> {
    let (components, site) = mutate_components(&t.components, &t.source, &t.target, rng)?;
    Ok(Mutant { value: MultiNatTrans { components, ..t.clone() }, site })
}

pub fn mutate_pseudo_nat(t: &PseudoSymMultiNatTrans, rng: &mut impl Rng) -> Result<Mutant<PseudoSymMultiNatTrans>> {
    let (components, site) = mutate_components(&t.components, &t.source.underlying, &t.target.underlying, rng)?;
    Ok(Mutant { value: PseudoSymMultiNatTrans { components, ..t.clone() }, site })
}

/// Changes one symmetry 2-cell `F_{sigma;f}`.
pub fn mutate_iso(f: &PseudoSymMultiFunctor, rng: &mut impl Rng) -> Result<Mutant<PseudoSymMultiFunctor>> {
    let mut iso: TableIso = crate::pseudo::tabulate_iso(f)?;
    let mut sites: Vec<(&(Signature, crate::perm::Perm), &Id)> = Vec::new();
    for (k, e) in &iso.entries {
        sites.extend(e.keys().map(|x| (k, x)));
    }
    let &((sig, sigma), x) = sites.choose(rng).expect("no symmetry isomorphisms");
    let (sig, sigma, x) = (sig.clone(), sigma.clone(), x.clone());
    let cur = iso.entries[&(sig.clone(), sigma.clone())][&x].clone();
    let at = f.underlying.image_signature(&sig)?.act(&sigma)?;
    let v = replacement(&hom_ids(f.target().as_ref(), &at, Level::Mor), &cur, rng);
    iso.entries.get_mut(&(sig.clone(), sigma.clone())).unwrap().insert(x.clone(), v.clone());
    Ok(Mutant {
        value: PseudoSymMultiFunctor { underlying: f.underlying.clone(), iso: Arc::new(iso) },
        site: format!("F_{{{sigma};{x}}} at {sig}: {cur} -> {v}"),
    })
}

/// Changes one entry of the underlying data or of the symmetry 2-cells.
pub fn mutate_pseudo(f: &PseudoSymMultiFunctor, rng: &mut impl Rng) -> Result<Mutant<PseudoSymMultiFunctor>> {
    if rng.random_bool(0.5) {
        return mutate_iso(f, rng);
    }
    let table = crate::functors::tabulate(&f.underlying)?;
    let (map, site) = mutate_table_map(f.target(), &table, rng, true)?;
    let underlying = MultiFunctor { map: Arc::new(map), ..f.underlying.clone() };
    Ok(Mutant { value: PseudoSymMultiFunctor { underlying, iso: f.iso.clone() }, site })
}

/// Changes one composite or identity of a table category.
pub fn mutate_category(c: &FinCat, rng: &mut impl Rng) -> Mutant<FinCat> {
    let mut out = c.clone();
    let comps = c.composite_table();
    if comps.is_empty() || rng.random_range(0..4) == 0 {
        let ids = c.identity_table();
        let a = (*ids.keys().collect::<Vec<_>>().choose(rng).expect("category has objects")).clone();
        let cur = ids[&a].clone();
        let v = replacement(c.morphisms(), &cur, rng);
        out.set_identity(a.clone(), v.clone());
        return Mutant { value: out, site: format!("identity of {a}: {cur} -> {v}") };
    }
    let (g, f) = (*comps.keys().collect::<Vec<_>>().choose(rng).unwrap()).clone();
    let cur = comps[&(g.clone(), f.clone())].clone();
    let v = replacement(c.morphisms(), &cur, rng);
    out.set_composite(g.clone(), f.clone(), v.clone());
    Mutant { value: out, site: format!("composite {g} . {f}: {cur} -> {v}") }
}

/// Changes one object or morphism image of a table functor.
pub fn mutate_fin_functor(f: &FinFunctor, rng: &mut impl Rng) -> Mutant<FinFunctor> {
    let mut out = f.clone();
    let objs = f.object_table();
    let mors = f.morphism_table();
    if mors.is_empty() || rng.random_range(0..3) == 0 {
        let a = (*objs.keys().collect::<Vec<_>>().choose(rng).expect("functor has objects")).clone();
        let cur = objs[&a].clone();
        let v = replacement(f.target().objects(), &cur, rng);
        out.set_object(a.clone(), v.clone());
        return Mutant { value: out, site: format!("object image of {a}: {cur} -> {v}") };
    }
    let m = (*mors.keys().collect::<Vec<_>>().choose(rng).unwrap()).clone();
    let cur = mors[&m].clone();
    let v = replacement(f.target().morphisms(), &cur, rng);
    out.set_morphism(m.clone(), v.clone());
    Mutant { value: out, site: format!("morphism image of {m}: {cur} -> {v}") }
}

pub fn mutate_fin_nat(t: &FinNatTrans, rng: &mut impl Rng) -> Mutant<FinNatTrans> {
    let comps = t.component_table();
    let a = (*comps.keys().collect::<Vec<_>>().choose(rng).expect("transformation has components")).clone();
    let cur = comps[&a].clone();
    let v = replacement(t.source().target().morphisms(), &cur, rng);
    let mut table: std::collections::HashMap<Id, Id> = comps.into_iter().collect();
    table.insert(a.clone(), v.clone());
    Mutant {
        value: FinNatTrans::new_unchecked(t.source().clone(), t.target().clone(), table),
        site: format!("component at {a}: {cur} -> {v}"),
    }
}
