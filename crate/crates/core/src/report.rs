//! Check reports shared by the law, axiom and theorem suites.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skipped,
            cases: 0,
            counterexample: None,
            note: Some(why.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Accumulates the cases of one named check, keeping the first counterexample.
#[derive(Debug)]
pub struct Tally {
    name: String,
    cases: u64,
    failures: u64,
    witness: Option<String>,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            cases: 0,
            failures: 0,
            witness: None,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Records the outcome of a fallible computation; an `Err` counts as a failure.
    pub fn record_result<E: std::fmt::Display>(
        &mut self,
        outcome: Result<bool, E>,
        witness: impl FnOnce() -> String,
    ) {
        match outcome {
            Ok(ok) => self.record(ok, witness),
            Err(e) => self.record(false, || format!("{} (error: {e})", witness())),
        }
    }

    pub fn cases(&self) -> u64 {
        self.cases
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    pub fn finish(self) -> Check {
        Check {
            status: if self.failures == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            name: self.name,
            cases: self.cases,
            counterexample: self.witness,
            note: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        let prefix = other.suite;
        self.checks.extend(other.checks.into_iter().map(|mut c| {
            c.name = format!("{prefix}/{}", c.name);
            c
        }));
    }

    /// No check failed. Skipped checks do not count against the report.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }
}
