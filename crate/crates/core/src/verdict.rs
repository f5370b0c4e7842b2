use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
}

/// Outcome of a verification: one row per named check plus every violation found.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub checks: Vec<CheckResult>,
    pub violations: Vec<String>,
}

impl VerdictReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check; it passes iff `violations` is empty.
    pub fn record(&mut self, name: &str, violations: Vec<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed: violations.is_empty(),
        });
        self.violations.extend(violations);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: VerdictReport) {
        self.checks.extend(other.checks);
        self.violations.extend(other.violations);
    }
}
