//! Check reports: every check either passes over all instances it saw or
//! fails with the first witness.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip)]
    pub instances: usize,
}

/// Accumulates one named check.
#[derive(Debug)]
pub struct Tally {
    check: String,
    instances: usize,
    witness: Option<String>,
}

impl Tally {
    pub fn new(check: impl Into<String>) -> Self {
        Self { check: check.into(), instances: 0, witness: None }
    }

    /// Records one instance; the witness is only built for the first failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn failed(&self) -> bool {
        self.witness.is_some()
    }

    pub fn finish(self) -> Finding {
        Finding {
            status: if self.witness.is_some() { Status::Fail } else { Status::Pass },
            check: self.check,
            witness: self.witness,
            instances: self.instances,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: Tally) {
        self.findings.push(t.finish());
    }

    pub fn extend(&mut self, other: Report) {
        self.findings.extend(other.findings);
    }

    /// Folds in a report over more instances of the same checks.
    pub fn merge(&mut self, other: Report) {
        for f in other.findings {
            match self.findings.iter_mut().find(|x| x.check == f.check) {
                Some(x) => {
                    x.instances += f.instances;
                    if x.status == Status::Pass && f.status == Status::Fail {
                        x.status = Status::Fail;
                        x.witness = f.witness;
                    }
                }
                None => self.findings.push(f),
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.status == Status::Fail)
    }

    pub fn get(&self, check: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.check == check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.findings {
            match (&x.status, &x.witness) {
                (Status::Pass, _) => writeln!(f, "PASS {} ({} instances)", x.check, x.instances)?,
                (Status::Fail, Some(w)) => writeln!(f, "FAIL {}: {w}", x.check)?,
                (Status::Fail, None) => writeln!(f, "FAIL {}", x.check)?,
            }
        }
        Ok(())
    }
}
