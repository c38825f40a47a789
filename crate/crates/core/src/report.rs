//! Structured verification results.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::Element;
use crate::error::Error;

/// Longest residual text kept in a report.
pub const RESIDUAL_CHARS: usize = 4000;

/// How a check enters the overall verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    /// Counts towards the verdict.
    Gating,
    /// Reported for information only.
    Info,
    /// Not run.
    Skipped,
}

/// The outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub gate: Gate,
    /// Number of nonzero terms left over, for element-valued checks.
    pub residual_terms: Option<usize>,
    /// Printed residual (truncated), when nonzero.
    pub residual: Option<String>,
    pub note: Option<String>,
}

impl Serialize for CheckResult {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("CheckResult", 5)?;
        st.serialize_field("check", &self.name)?;
        st.serialize_field("status", self.status())?;
        if let Some(n) = self.residual_terms {
            st.serialize_field("residual_terms", &n)?;
        }
        if let Some(r) = &self.residual {
            st.serialize_field("residual", r)?;
        }
        if let Some(n) = &self.note {
            st.serialize_field("note", n)?;
        }
        st.end()
    }
}

fn truncate(s: String) -> String {
    if s.chars().count() <= RESIDUAL_CHARS {
        s
    } else {
        let mut t: String = s.chars().take(RESIDUAL_CHARS).collect();
        t.push_str(" ...");
        t
    }
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        CheckResult { name: name.into(), passed, gate: Gate::Gating, residual_terms: None, residual: None, note: None }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckResult { gate: Gate::Skipped, ..CheckResult::new(name, true) }.with_note(why)
    }

    /// Marks the check as informational: it no longer affects the verdict.
    pub fn info(mut self) -> Self {
        self.gate = Gate::Info;
        self
    }

    /// `pass`, `fail`, `skipped`, or `info-pass` / `info-fail`.
    pub fn status(&self) -> &'static str {
        match (self.gate, self.passed) {
            (Gate::Skipped, _) => "skipped",
            (Gate::Gating, true) => "pass",
            (Gate::Gating, false) => "fail",
            (Gate::Info, true) => "info-pass",
            (Gate::Info, false) => "info-fail",
        }
    }

    /// Passes iff `residual` is zero and carries no unresolved delta terms.
    pub fn from_residual(name: impl Into<String>, residual: &Element) -> Self {
        let passed = residual.is_zero();
        CheckResult {
            name: name.into(),
            passed,
            gate: Gate::Gating,
            residual_terms: Some(residual.len()),
            residual: (!passed).then(|| truncate(residual.to_string())),
            note: None,
        }
    }

    /// A check that could not be carried out.
    pub fn from_error(name: impl Into<String>, e: &Error) -> Self {
        CheckResult::new(name, false).with_note(e.to_string())
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_residual_text(mut self, text: impl Into<String>) -> Self {
        self.residual = Some(truncate(text.into()));
        self
    }
}

/// All results of one command run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub instance: String,
    pub toggles: BTreeMap<String, String>,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>, instance: impl Into<String>, toggles: &crate::algebra::Toggles) -> Self {
        VerificationReport {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            instance: instance.into(),
            toggles: toggles.describe().into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            passed: true,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: CheckResult) {
        self.passed &= c.passed || c.gate != Gate::Gating;
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = CheckResult>) {
        for c in cs {
            self.push(c);
        }
    }

    /// One line per check, for terminals.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<10} {}", c.status().to_uppercase(), c.name));
            if let Some(n) = &c.note {
                out.push_str(&format!("  ({n})"));
            }
            out.push('\n');
        }
        out.push_str(&format!("{}: {} on {}\n", if self.passed { "PASSED" } else { "FAILED" }, self.command, self.instance));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
