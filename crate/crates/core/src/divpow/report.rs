use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// Observed and recorded, not asserted.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    /// Instances examined.
    pub checked: usize,
    /// Instances that failed.
    pub failures: usize,
    /// The first failing instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

/// Accumulates instances of one named check.
#[derive(Debug)]
pub(crate) struct Tally {
    name: String,
    checked: usize,
    failures: usize,
    witness: Option<Value>,
    informational: bool,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Self {
        Tally { name: name.into(), checked: 0, failures: 0, witness: None, informational: false }
    }

    pub fn informational(mut self, yes: bool) -> Self {
        self.informational = yes;
        self
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn finish(self) -> CheckEntry {
        let status = if self.informational {
            Status::Info
        } else if self.failures == 0 {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckEntry { name: self.name, status, checked: self.checked, failures: self.failures, witness: self.witness }
    }
}

impl CheckReport {
    pub fn push(&mut self, entry: CheckEntry) {
        self.entries.push(entry);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|e| e.status)
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{:<28} {} ({} checked", e.name, e.status, e.checked)?;
            if e.failures > 0 {
                write!(f, ", {} failed", e.failures)?;
            }
            write!(f, ")")?;
            if let Some(w) = &e.witness {
                write!(f, " witness {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
