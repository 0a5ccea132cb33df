//! PASS/FAIL reports with exact residuals.

use serde::{Deserialize, Serialize};

use crate::kernel::{format_q, Q};

/// Verdict of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// One residual entry `{"deg": [...], "value": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub deg: Vec<i64>,
    pub value: String,
}

/// Serializable outcome of a verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub residuals: Vec<Residual>,
    pub reliable_order: Vec<i64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub version: String,
}

impl Report {
    /// A passing report with no residuals.
    pub fn new(check: impl Into<String>, seed: u64) -> Self {
        Report {
            check: check.into(),
            status: Status::Pass,
            residuals: Vec::new(),
            reliable_order: Vec::new(),
            seed,
            notes: Vec::new(),
            config_hash: None,
            version: crate::VERSION.to_string(),
        }
    }

    /// True iff the status is PASS.
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record a nonzero exact residual; marks the report FAIL.
    pub fn push_residual(&mut self, deg: Vec<i64>, value: &Q) {
        self.residuals.push(Residual {
            deg,
            value: format_q(value),
        });
        self.status = Status::Fail;
    }

    /// Record a residual given as text (multiprecision values); marks FAIL.
    pub fn push_residual_text(&mut self, deg: Vec<i64>, value: String) {
        self.residuals.push(Residual { deg, value });
        self.status = Status::Fail;
    }

    /// Attach an informational note.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Mark FAIL with an explanatory note.
    pub fn fail(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
        self.status = Status::Fail;
    }

    /// Require a condition; on failure records the note and marks FAIL.
    pub fn require(&mut self, ok: bool, text: impl Into<String>) {
        if !ok {
            self.fail(text);
        }
    }

    /// Fold a sub-report into this one (notes prefixed by the sub-check name).
    pub fn absorb(&mut self, sub: &Report) {
        if !sub.passed() {
            self.status = Status::Fail;
        }
        self.notes.push(format!(
            "{}: {}",
            sub.check,
            if sub.passed() { "PASS" } else { "FAIL" }
        ));
        for n in &sub.notes {
            self.notes.push(format!("  {}: {n}", sub.check));
        }
        self.residuals.extend(sub.residuals.iter().cloned());
    }

    /// Pretty JSON rendering.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn residual_marks_fail() {
        let mut r = Report::new("x", 3);
        assert!(r.passed());
        r.push_residual(vec![1], &rat(1, 2));
        assert!(!r.passed());
        let j = r.to_json();
        assert!(j.contains("\"FAIL\""));
        assert!(j.contains("\"1/2\""));
    }
}
