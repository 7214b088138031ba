//! Pass/fail records for exact identity checks.

use serde::Serialize;

/// Outcome of checking an identity on a finite set of cases; `witness`
/// describes the first failing case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub cases: usize,
    pub witness: Option<String>,
}

impl Check {
    pub fn new() -> Self {
        Check { holds: true, cases: 0, witness: None }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.holds {
            self.holds = false;
            self.witness = Some(witness());
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Check { holds: false, cases: 1, witness: Some(witness.into()) }
    }

    pub fn merge(&mut self, other: Check) {
        self.cases += other.cases;
        if self.holds && !other.holds {
            self.holds = false;
            self.witness = other.witness;
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.witness {
            None => write!(f, "holds on {} cases", self.cases),
            Some(w) => write!(f, "fails after {} cases: {w}", self.cases),
        }
    }
}
