//! Outcome records shared by the verification suites.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// Inconclusive outcomes do not count as failures.
    pub fn is_failure(self) -> bool {
        self == Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// A closed-form value or identity being confirmed.
    Stated,
    /// A consequence worked out from stated formulas.
    Derived,
    /// Holds by definition.
    Trivial,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Stated => "stated",
            Provenance::Derived => "derived",
            Provenance::Trivial => "trivial",
        }
    }
}

/// One exact comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub provenance: Provenance,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        ok: bool,
        expected: impl ToString,
        actual: impl ToString,
        provenance: Provenance,
    ) -> Self {
        Check {
            name: name.into(),
            status: Status::from_bool(ok),
            expected: expected.to_string(),
            actual: actual.to_string(),
            provenance,
        }
    }

    /// Compares two displayable values by equality.
    pub fn equal<T: PartialEq + fmt::Display>(
        name: impl Into<String>,
        expected: &T,
        actual: &T,
        provenance: Provenance,
    ) -> Self {
        Self::new(name, expected == actual, expected, actual, provenance)
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| !c.status.is_failure())
}
