//! Golden fixture files. `cargo test -p multicoh-cli --test golden -- --ignored`
//! rewrites them; the other tests compare against what is on disk.

use std::path::{Path, PathBuf};

use multicoh::construct::{assoc_operad, barratt_eccles, weight_operad, FinCommMonoid};
use multicoh::fixtures::{collapse, monoid_algebra, weight_nat, weight_shift};
use multicoh::functors::check_multifunctor;
use multicoh::multicat::{check_multicat, TableMulticategory};
use multicoh::mutate::{mutate_iso, mutate_multicat};
use multicoh::pseudo::{check_pseudo, include_j_unchecked};
use multicoh::rigidify::rigidify_unchecked;
use multicoh_cli::fixture::{
    components, functor_payload, multicat_table, parse_str, pseudo_payload, to_json, Builder, FixtureDocument, Kind,
    MulticatSpec, MulticatTable, NatPayload, Payload, Ref,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn builder(b: Builder) -> MulticatSpec {
    MulticatSpec::Builder(b)
}

fn doc(kind: Kind, name: &str, n: usize, payload: Payload) -> FixtureDocument {
    FixtureDocument { kind, name: name.into(), arity_bound: n, payload }
}

fn golden() -> Vec<(&'static str, FixtureDocument)> {
    let z3 = FinCommMonoid::cyclic(3);
    let w = weight_operad(z3.clone(), 3);
    let weight = || builder(Builder::Weight { order: 3 });
    let shift = |c| weight_shift(&w, &z3, 2, c).unwrap();
    let mut out = vec![
        ("golden/terminal.json", doc(Kind::Multicat, "terminal", 3, Payload::Multicat(builder(Builder::Terminal)))),
        (
            "golden/be2_table.json",
            doc(Kind::Multicat, "be2", 2, Payload::Multicat(MulticatSpec::Table(multicat_table(barratt_eccles(2).as_ref()).unwrap()))),
        ),
        (
            "golden/assoc2_table.json",
            doc(Kind::Multicat, "assoc2", 2, Payload::Multicat(MulticatSpec::Table(multicat_table(assoc_operad(2).as_ref()).unwrap()))),
        ),
        (
            "golden/empty.json",
            doc(
                Kind::Multicat,
                "empty",
                3,
                Payload::Multicat(MulticatSpec::Table(MulticatTable {
                    name: "empty".into(),
                    objects: vec![],
                    homs: vec![],
                    units: vec![],
                    actions: vec![],
                    gammas: vec![],
                })),
            ),
        ),
        (
            "golden/product.json",
            doc(
                Kind::Multicat,
                "assoc x end(Z/2)",
                3,
                Payload::Multicat(builder(Builder::Product {
                    left: Box::new(builder(Builder::Assoc)),
                    right: Box::new(builder(Builder::EndOfMonoid { order: 2 })),
                })),
            ),
        ),
        (
            "golden/collapse.json",
            doc(
                Kind::Pseudo,
                "collapse",
                3,
                Payload::Pseudo(pseudo_payload(&collapse(3).unwrap(), builder(Builder::Assoc), builder(Builder::BarrattEccles)).unwrap()),
            ),
        ),
        (
            "golden/z3_algebra.json",
            doc(
                Kind::Pseudo,
                "Z/3-algebra",
                3,
                Payload::Pseudo(
                    pseudo_payload(&monoid_algebra(3, 3).unwrap(), builder(Builder::Terminal), builder(Builder::EndOfMonoid { order: 3 }))
                        .unwrap(),
                ),
            ),
        ),
        (
            "golden/rigid_collapse.json",
            doc(
                Kind::Multifunctor,
                "phi(collapse)",
                3,
                Payload::Multifunctor(
                    functor_payload(
                        &rigidify_unchecked(&collapse(3).unwrap()).unwrap(),
                        builder(Builder::Product {
                            left: Box::new(builder(Builder::Assoc)),
                            right: Box::new(builder(Builder::BarrattEccles)),
                        }),
                        builder(Builder::BarrattEccles),
                    )
                    .unwrap(),
                ),
            ),
        ),
    ];
    for (file, c) in [("golden/shift_a.json", 1), ("golden/shift_b.json", 0)] {
        let f = shift(c);
        out.push((file, doc(Kind::Multifunctor, &f.name, 3, Payload::Multifunctor(functor_payload(&f, weight(), weight()).unwrap()))));
        let pfile = file.replace("shift_", "pshift_");
        let p = include_j_unchecked(&f);
        let pdoc = doc(Kind::Pseudo, &f.name, 3, Payload::Pseudo(pseudo_payload(&p, weight(), weight()).unwrap()));
        out.push((Box::leak(pfile.into_boxed_str()), pdoc));
    }
    let t = weight_nat(&w, &z3, 2, 1, 0).unwrap();
    out.push((
        "golden/shift_nat.json",
        doc(
            Kind::Nattrans,
            &t.name,
            3,
            Payload::Nattrans(NatPayload {
                source: Ref::File("shift_a.json".into()),
                target: Ref::File("shift_b.json".into()),
                components: components(&t.components),
            }),
        ),
    ));
    out.push((
        "golden/shift_pseudonat.json",
        doc(
            Kind::Pseudonat,
            &t.name,
            3,
            Payload::Pseudonat(NatPayload {
                source: Ref::File("pshift_a.json".into()),
                target: Ref::File("pshift_b.json".into()),
                components: components(&t.components),
            }),
        ),
    ));
    out.extend(mutated());
    out
}

fn mutated() -> Vec<(&'static str, FixtureDocument)> {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut out = Vec::new();

    let base = TableMulticategory::materialize(assoc_operad(2).as_ref()).unwrap();
    let m = loop {
        let m = mutate_multicat(&base, &mut rng);
        if !m.site.contains("mutant") && !check_multicat(&m.value).passed() {
            break m;
        }
    };
    let mut t = multicat_table(&m.value).unwrap();
    t.name = "assoc2".into();
    out.push(("mutated/assoc2_gamma.json", doc(Kind::Multicat, "assoc2 mutated", 2, Payload::Multicat(MulticatSpec::Table(t)))));

    let c = collapse(3).unwrap();
    let p = loop {
        let p = mutate_iso(&c, &mut rng).unwrap();
        if !p.site.contains("mutant") && !check_pseudo(&p.value).passed() {
            break p;
        }
    };
    let payload = pseudo_payload(&p.value, builder(Builder::Assoc), builder(Builder::BarrattEccles)).unwrap();
    out.push(("mutated/collapse_iso.json", doc(Kind::Pseudo, "collapse mutated", 3, Payload::Pseudo(payload))));

    let z3 = FinCommMonoid::cyclic(3);
    let w = weight_operad(z3.clone(), 3);
    let f = weight_shift(&w, &z3, 2, 1).unwrap();
    assert!(check_multifunctor(&f).passed());
    let mut payload = functor_payload(&f, builder(Builder::Weight { order: 3 }), builder(Builder::Weight { order: 3 })).unwrap();
    payload.cells[0].image = multicoh::Id::name("nowhere");
    out.push(("mutated/shift_dangling.json", doc(Kind::Multifunctor, "dangling", 3, Payload::Multifunctor(payload))));

    let mut t = multicat_table(barratt_eccles(2).as_ref()).unwrap();
    let i = t.actions.iter().position(|a| a.signature.arity() == 2).unwrap();
    t.actions[i].sigma = vec![2, 2];
    out.push(("mutated/bad_sigma.json", doc(Kind::Multicat, "bad sigma", 2, Payload::Multicat(MulticatSpec::Table(t)))));

    out.push((
        "mutated/arity_mismatch.json",
        doc(
            Kind::Nattrans,
            "arity mismatch",
            2,
            Payload::Nattrans(NatPayload {
                source: Ref::File("../golden/shift_a.json".into()),
                target: Ref::File("../golden/shift_b.json".into()),
                components: vec![],
            }),
        ),
    ));
    out
}

#[test]
#[ignore]
fn regenerate() {
    for (file, d) in golden() {
        let path = dir().join(file);
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, to_json(&d)).unwrap();
    }
}

#[test]
fn files_match_generators() {
    for (file, d) in golden() {
        let text = std::fs::read_to_string(dir().join(file)).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert_eq!(text, to_json(&d), "{file} is stale");
        assert_eq!(parse_str(&text).unwrap(), d, "{file}");
    }
}

#[test]
fn serialize_parse_is_identity_on_files() {
    for (file, _) in golden() {
        let text = std::fs::read_to_string(dir().join(file)).unwrap();
        let d = parse_str(&text).unwrap();
        assert_eq!(to_json(&d), text, "{file}");
    }
}
