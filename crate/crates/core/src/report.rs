use std::fmt;

use serde::{Deserialize, Serialize};

/// Witnesses kept per axiom. The full count is always tracked.
pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub witness: String,
    pub detail: String,
}

/// Result of checking one axiom family over every enumerated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub instances: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
}

impl AxiomCheck {
    pub fn new(axiom: &str) -> AxiomCheck {
        AxiomCheck { axiom: axiom.to_string(), instances: 0, failure_count: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Counts one instance and records a failure when `ok` is false.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(witness(), detail());
        }
    }

    pub fn fail(&mut self, witness: String, detail: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(Failure { witness, detail });
        }
    }

    /// Records the outcome of comparing two evaluations.
    pub fn compare<T: PartialEq + fmt::Display, E: fmt::Display>(
        &mut self,
        lhs: Result<T, E>,
        rhs: Result<T, E>,
        witness: impl FnOnce() -> String,
    ) {
        self.instances += 1;
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(l), Ok(r)) => self.fail(witness(), format!("{l} != {r}")),
            (Err(e), _) | (_, Err(e)) => self.fail(witness(), e.to_string()),
        }
    }

    pub fn absorb(&mut self, other: AxiomCheck) {
        self.instances += other.instances;
        self.failure_count += other.failure_count;
        let room = MAX_WITNESSES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }
}

/// A deterministic list of axiom checks for one subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<AxiomCheck>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Report {
        Report { subject: subject.into(), checks: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    /// The named check, created on first use. Order of first use is kept.
    pub fn axiom(&mut self, name: &str) -> &mut AxiomCheck {
        let idx = match self.checks.iter().position(|c| c.axiom == name) {
            Some(i) => i,
            None => {
                self.checks.push(AxiomCheck::new(name));
                self.checks.len() - 1
            }
        };
        &mut self.checks[idx]
    }

    pub fn push(&mut self, check: AxiomCheck) {
        self.axiom(&check.axiom.clone()).absorb(check);
    }

    /// Appends every check of `other`, merging checks with the same name.
    pub fn merge(&mut self, other: Report) {
        for c in other.checks {
            self.push(c);
        }
    }

    /// Like `merge`, but prefixes axiom names with `prefix/`.
    pub fn merge_prefixed(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.axiom = format!("{prefix}/{}", c.axiom);
            self.push(c);
        }
    }

    pub fn failed_axioms(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed()).map(|c| c.axiom.as_str()).collect()
    }

    /// `axiom: witness: detail` of the first recorded failure.
    pub fn first_failure(&self) -> Option<String> {
        self.checks.iter().find(|c| !c.passed()).map(|c| match c.failures.first() {
            Some(x) => format!("{}: {}: {}", c.axiom, x.witness, x.detail),
            None => c.axiom.clone(),
        })
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn instances(&self) -> u64 {
        self.checks.iter().map(|c| c.instances).sum()
    }

    pub fn failure_count(&self) -> u64 {
        self.checks.iter().map(|c| c.failure_count).sum()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.subject, if self.passed() { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(f, "  {status} {} ({} instances, {} failures)", c.axiom, c.instances, c.failure_count)?;
            if let Some(first) = c.failures.first() {
                writeln!(f, "       first witness: {}: {}", first.witness, first.detail)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_keeps_order_and_counts() {
        let mut a = Report::new("x");
        a.axiom("unity").record(true, String::new, String::new);
        let mut b = Report::new("x");
        b.axiom("associativity").record(false, || "w".into(), || "d".into());
        b.axiom("unity").record(true, String::new, String::new);
        a.merge(b);
        assert_eq!(a.checks.iter().map(|c| c.axiom.as_str()).collect::<Vec<_>>(), ["unity", "associativity"]);
        assert_eq!(a.get("unity").unwrap().instances, 2);
        assert_eq!(a.failed_axioms(), ["associativity"]);
        assert!(!a.passed());
    }

    #[test]
    fn witnesses_are_capped() {
        let mut c = AxiomCheck::new("a");
        for i in 0..20 {
            c.record(false, || i.to_string(), String::new);
        }
        assert_eq!(c.failure_count, 20);
        assert_eq!(c.failures.len(), MAX_WITNESSES);
        assert_eq!(c.failures[0].witness, "0");
    }
}
