//! Machine-readable check reports.

use serde::{Deserialize, Serialize};
use vlplus_core::checks::{Check, Provenance, Status};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl From<Status> for EntryStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => EntryStatus::Pass,
            Status::Fail => EntryStatus::Fail,
            Status::Inconclusive => EntryStatus::Inconclusive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryProvenance {
    Stated,
    Derived,
    Trivial,
}

impl From<Provenance> for EntryProvenance {
    fn from(p: Provenance) -> Self {
        match p {
            Provenance::Stated => EntryProvenance::Stated,
            Provenance::Derived => EntryProvenance::Derived,
            Provenance::Trivial => EntryProvenance::Trivial,
        }
    }
}

/// One exact comparison; `expected` and `actual` are exact renderings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub status: EntryStatus,
    pub expected: String,
    pub actual: String,
    pub provenance: EntryProvenance,
}

impl From<&Check> for Entry {
    fn from(c: &Check) -> Self {
        Entry {
            name: c.name.clone(),
            status: c.status.into(),
            expected: c.expected.clone(),
            actual: c.actual.clone(),
            provenance: c.provenance.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_us: u64,
}

/// `all_pass` ignores inconclusive entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub k: u32,
    pub suite: String,
    pub entries: Vec<Entry>,
    pub all_pass: bool,
    pub timing: Timing,
}

impl Report {
    pub fn new(k: u32, suite: impl Into<String>, entries: Vec<Entry>, timing: Timing) -> Self {
        let all_pass = entries.iter().all(|e| e.status != EntryStatus::Fail);
        Report {
            schema_version: SCHEMA_VERSION,
            k,
            suite: suite.into(),
            entries,
            all_pass,
            timing,
        }
    }

    pub fn from_checks(k: u32, suite: impl Into<String>, checks: &[Check], timing: Timing) -> Self {
        Self::new(k, suite, checks.iter().map(Entry::from).collect(), timing)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Fixed-column plain text, one entry per line.
    pub fn to_text(&self) -> String {
        let name_w = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!("suite {} (k = {})\n", self.suite, self.k);
        for e in &self.entries {
            let status = match e.status {
                EntryStatus::Pass => "PASS",
                EntryStatus::Fail => "FAIL",
                EntryStatus::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("  {status:<12}  {:<name_w$}", e.name));
            if e.status == EntryStatus::Pass {
                out.push_str(&format!("  = {}\n", short(&e.actual)));
            } else {
                out.push_str(&format!(
                    "  expected {}  actual {}\n",
                    short(&e.expected),
                    short(&e.actual)
                ));
            }
        }
        let failed = self.entries.iter().filter(|e| e.status == EntryStatus::Fail).count();
        let flagged = self
            .entries
            .iter()
            .filter(|e| e.status == EntryStatus::Inconclusive)
            .count();
        out.push_str(&format!(
            "{} checks, {} failed, {} inconclusive: {}\n",
            self.entries.len(),
            failed,
            flagged,
            if self.all_pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

/// Long states are elided in text output; JSON keeps the full strings.
fn short(s: &str) -> String {
    const MAX: usize = 120;
    let flat = s.lines().map(str::trim).collect::<Vec<_>>().join("; ");
    let s = flat.as_str();
    if s.chars().count() <= MAX {
        s.to_string()
    } else {
        let head: String = s.chars().take(MAX).collect();
        format!("{head}... ({} chars)", s.chars().count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass_ignores_inconclusive() {
        let entry = |status| Entry {
            name: "x".into(),
            status,
            expected: "0".into(),
            actual: "0".into(),
            provenance: EntryProvenance::Derived,
        };
        let r = Report::new(2, "s", vec![entry(EntryStatus::Pass), entry(EntryStatus::Inconclusive)], Timing::default());
        assert!(r.all_pass);
        let r = Report::new(2, "s", vec![entry(EntryStatus::Fail)], Timing::default());
        assert!(!r.all_pass);
        assert!(r.to_text().contains("FAIL"));
    }
}
