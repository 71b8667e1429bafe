use std::path::{Path, PathBuf};
use std::time::Instant;

use multicoh::construct::{weight_operad, FinCommMonoid};
use multicoh::fixtures::{adjunction_corpora, weight_nat, weight_shift};
use multicoh::functors::{check_multifunctor, check_multinat, compose_multifunctor, multifunctor_diff, MultiNatTrans};
use multicoh::multicat::check_multicat_factored;
use multicoh::pseudo::{check_pseudo, check_pseudo_nat, include_j_unchecked, pseudo_diff, PseudoSymMultiNatTrans};
use multicoh::rigidify::{algebra_demo, check_adjunction, eta_star, pi, rigidify_unchecked, Corpus};
use multicoh::{Id, Report};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::fixture::{
    functor_payload, load_fixture, rebase, to_json, Builder, FixtureDocument, FixtureError, Kind, MulticatSpec, Payload,
    Value,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Everything a command prints, in one place.
#[derive(Debug, Serialize)]
pub struct Outcome {
    pub command: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<Report>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Outcome {
    fn new(command: &str) -> Outcome {
        Outcome { command: command.into(), exit_code: EXIT_PASS, reports: Vec::new(), notes: Vec::new(), error: None }
    }

    fn invalid(command: &str, error: impl ToString) -> Outcome {
        Outcome { exit_code: EXIT_INVALID, error: Some(error.to_string()), ..Outcome::new(command) }
    }

    fn report(&mut self, r: Report) {
        if !r.passed() && self.exit_code == EXIT_PASS {
            self.exit_code = EXIT_FAIL;
        }
        self.reports.push(r);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("outcome serializes") + "\n",
            Format::Text => {
                let mut s = String::new();
                for r in &self.reports {
                    s.push_str(&r.to_string());
                }
                for n in &self.notes {
                    s.push_str(n);
                    s.push('\n');
                }
                if let Some(e) = &self.error {
                    s.push_str("error: ");
                    s.push_str(e);
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn load(command: &str, path: &Path, arity_bound: Option<usize>) -> Result<crate::fixture::Fixture, Outcome> {
    let f = load_fixture(path).map_err(|e: FixtureError| Outcome::invalid(command, e))?;
    match arity_bound {
        Some(b) if b != f.doc.arity_bound => Err(Outcome::invalid(
            command,
            format!("{}: arity mismatch: document has arity bound {}, --arity-bound is {b}", path.display(), f.doc.arity_bound),
        )),
        _ => Ok(f),
    }
}

pub fn check(path: &Path, arity_bound: Option<usize>) -> Outcome {
    let f = match load("check", path, arity_bound) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let mut out = Outcome::new("check");
    let r = match &f.value {
        Value::Multicat(m) => check_multicat_factored(m.as_ref()),
        Value::Multifunctor(g) => check_multifunctor(g),
        Value::Pseudo(g) => check_pseudo(g),
        Value::Nattrans(t) => check_multinat(t),
        Value::Pseudonat(t) => check_pseudo_nat(t),
    };
    out.report(r);
    out
}

fn pseudo_specs(doc: &FixtureDocument) -> Option<(&MulticatSpec, &MulticatSpec)> {
    match &doc.payload {
        Payload::Pseudo(p) => Some((&p.source, &p.target)),
        _ => None,
    }
}

/// Writes `phi(F)` as a multifunctor document out of `M x EΣ*`.
pub fn rigidify(path: &Path, out_path: Option<&Path>, arity_bound: Option<usize>) -> (Outcome, Option<String>) {
    let f = match load("rigidify", path, arity_bound) {
        Ok(f) => f,
        Err(o) => return (o, None),
    };
    let (Value::Pseudo(pseudo), Some((source, target))) = (&f.value, pseudo_specs(&f.doc)) else {
        return (Outcome::invalid("rigidify", format!("{} is a {} document, expected pseudo", path.display(), f.doc.kind)), None);
    };
    let report = check_pseudo(pseudo);
    if !report.passed() {
        let mut out = Outcome::invalid("rigidify", "input is not a pseudo symmetric multifunctor; nothing written");
        out.reports.push(report);
        return (out, None);
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let to = out_path.and_then(Path::parent).map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let relocate = |s: &MulticatSpec| if base == to { s.clone() } else { rebase(s, &base) };
    let result = rigidify_unchecked(pseudo).and_then(|g| {
        let source = MulticatSpec::Builder(Builder::Product {
            left: Box::new(relocate(source)),
            right: Box::new(MulticatSpec::Builder(Builder::BarrattEccles)),
        });
        functor_payload(&g, source, relocate(target))
    });
    let payload = match result {
        Ok(p) => p,
        Err(e) => return (Outcome::invalid("rigidify", e), None),
    };
    let doc = FixtureDocument {
        kind: Kind::Multifunctor,
        name: format!("phi({})", f.doc.name),
        arity_bound: f.doc.arity_bound,
        payload: Payload::Multifunctor(payload),
    };
    let text = to_json(&doc);
    let mut out = Outcome::new("rigidify");
    out.reports.push(report);
    if let Some(p) = out_path {
        if let Err(e) = std::fs::write(p, &text) {
            return (Outcome::invalid("rigidify", format!("cannot write {}: {e}", p.display())), None);
        }
        out.notes.push(format!("wrote {}", p.display()));
        return (out, None);
    }
    (out, Some(text))
}

fn diff_report(subject: &str, axiom: &str, witness: &str, diff: multicoh::Result<Option<String>>) -> Report {
    let mut r = Report::new(subject);
    let detail = match diff {
        Ok(d) => d,
        Err(e) => Some(e.to_string()),
    };
    r.axiom(axiom).record(detail.is_none(), || witness.to_string(), || detail.unwrap_or_default());
    r
}

/// `eta* phi = 1` on a pseudo document, `phi eta* = 1` on a symmetric one.
pub fn roundtrip(path: &Path, arity_bound: Option<usize>) -> Outcome {
    let f = match load("roundtrip", path, arity_bound) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let mut out = Outcome::new("roundtrip");
    match &f.value {
        Value::Pseudo(p) => {
            out.report(check_pseudo(p));
            let diff = rigidify_unchecked(p).and_then(|g| eta_star(&g)).map(|h| pseudo_diff(&h, p));
            out.report(diff_report(&f.doc.name, "eta*-phi", p.name(), diff));
        }
        Value::Multifunctor(g) => {
            let e = match eta_star(g) {
                Ok(e) => e,
                Err(e) => return Outcome::invalid("roundtrip", format!("{}: {e}", path.display())),
            };
            out.report(check_multifunctor(g));
            let diff = rigidify_unchecked(&e).map(|h| multifunctor_diff(&h, g));
            out.report(diff_report(&f.doc.name, "phi-eta*", &g.name, diff));
        }
        _ => {
            return Outcome::invalid(
                "roundtrip",
                format!("{} is a {} document, expected pseudo or multifunctor", path.display(), f.doc.kind),
            )
        }
    }
    out
}

/// A weight-operad corpus with shifts and transformations drawn from `seed`.
fn seeded_corpus(seed: u64, n: usize, size: usize) -> multicoh::Result<(multicoh::MultiRef, Corpus)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = rng.random_range(2..=5);
    let mon = FinCommMonoid::cyclic(k);
    let w = weight_operad(mon.clone(), n);
    let p = pi(&w)?;
    let mut c = Corpus::default();
    for _ in 0..size {
        let (h, s, s2) = (rng.random_range(0..k), rng.random_range(0..k), rng.random_range(0..k));
        let f = weight_shift(&w, &mon, h, s)?;
        c.pseudo.push(include_j_unchecked(&f));
        c.rigid.push(compose_multifunctor(&f, &p)?);
        c.symmetric.push(f);
        let t = weight_nat(&w, &mon, h, s, s2)?;
        c.pseudo_nats.push(PseudoSymMultiNatTrans {
            name: t.name.clone(),
            source: include_j_unchecked(&t.source),
            target: include_j_unchecked(&t.target),
            components: t.components.clone(),
        });
        c.rigid_nats.push(MultiNatTrans {
            name: format!("{}.pi", t.name),
            source: compose_multifunctor(&t.source, &p)?,
            target: compose_multifunctor(&t.target, &p)?,
            components: [(Id::pair(Id::star(), Id::star()), t.components[&Id::star()].clone())].into(),
        });
    }
    Ok((w, c))
}

pub fn adjunction_demo(seed: u64, n: usize, size: usize) -> Outcome {
    let mut out = Outcome::new("adjunction-demo");
    let mut corpora = match adjunction_corpora(n) {
        Ok(c) => c,
        Err(e) => return Outcome::invalid("adjunction-demo", e),
    };
    match seeded_corpus(seed, n, size) {
        Ok((w, c)) => corpora.push((w.clone(), w, c)),
        Err(e) => return Outcome::invalid("adjunction-demo", e),
    }
    for (m, target, c) in &corpora {
        let t = Instant::now();
        let r = check_adjunction(m, target, c);
        out.notes.push(format!(
            "{}: {} pseudo, {} rigid, {} symmetric, {} pseudo transformations, {} transformations; {} instances in {:.2?}",
            r.subject,
            c.pseudo.len(),
            c.rigid.len(),
            c.symmetric.len(),
            c.pseudo_nats.len(),
            c.rigid_nats.len(),
            r.instances(),
            t.elapsed()
        ));
        out.report(r);
    }
    out
}

pub fn algebra(k: usize, n: usize) -> Outcome {
    if k == 0 {
        return Outcome::invalid("algebra-demo", "k must be positive");
    }
    let t = Instant::now();
    let demo = match algebra_demo(k, n) {
        Ok(d) => d,
        Err(e) => return Outcome::invalid("algebra-demo", e),
    };
    let mut out = Outcome::new("algebra-demo");
    out.report(demo.pseudo_report);
    out.report(demo.algebra_report);
    out.notes.push(format!("{} -> {} rigidified in {:.2?}", demo.algebra.source.key(), demo.algebra.target.key(), t.elapsed()));
    out
}
