//! Verification reports shared by every checker.

use alloc::string::String;
use alloc::vec::Vec;

use crate::density::Side;
use crate::exact::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FindingStatus {
    /// A radius with density outside `(δ, 1 − δ)` on the given side.
    Witness(Side),
    /// A checked condition holds.
    Pass,
    /// A checked condition fails.
    Violation,
    /// Not evaluated (hypothesis unmet or out of scope of the checker).
    Unchecked,
}

impl FindingStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingStatus::Witness(s) => s.as_str(),
            FindingStatus::Pass => "pass",
            FindingStatus::Violation => "violation",
            FindingStatus::Unchecked => "unchecked",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub label: String,
    pub point: Option<Rational>,
    pub radius: Option<Rational>,
    /// Exact values backing the verdict, e.g. a density or both sides of
    /// an inequality.
    pub values: Vec<(String, Rational)>,
    pub status: FindingStatus,
}

impl Finding {
    pub fn new(label: impl Into<String>, status: FindingStatus) -> Self {
        Self { label: label.into(), point: None, radius: None, values: Vec::new(), status }
    }

    pub fn at(mut self, point: &Rational) -> Self {
        self.point = Some(point.clone());
        self
    }

    pub fn radius(mut self, radius: &Rational) -> Self {
        self.radius = Some(radius.clone());
        self
    }

    pub fn value(mut self, name: impl Into<String>, v: Rational) -> Self {
        self.values.push((name.into(), v));
        self
    }

    pub fn is_violation(&self) -> bool {
        self.status == FindingStatus::Violation
    }
}

/// Overall outcome. `HypothesesUnmet` reports carry no violation and so
/// count as passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Violated,
    HypothesesUnmet,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Violated => "violated",
            Outcome::HypothesesUnmet => "hypotheses-unmet",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub findings: Vec<Finding>,
    pub notes: Vec<String>,
    hypotheses_met: bool,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self { subject: subject.into(), findings: Vec::new(), notes: Vec::new(), hypotheses_met: true }
    }

    pub fn push(&mut self, f: Finding) {
        self.findings.push(f);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    /// Marks the report as skipped because a precondition failed.
    pub fn hypotheses_unmet(&mut self, why: impl Into<String>) {
        self.hypotheses_met = false;
        self.push(Finding::new(why, FindingStatus::Unchecked));
    }

    /// True iff no finding is a violation.
    pub fn passed(&self) -> bool {
        !self.findings.iter().any(Finding::is_violation)
    }

    pub fn outcome(&self) -> Outcome {
        if !self.passed() {
            Outcome::Violated
        } else if self.hypotheses_met {
            Outcome::Holds
        } else {
            Outcome::HypothesesUnmet
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.is_violation())
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.hypotheses_met &= other.hypotheses_met;
        self.findings.extend(other.findings);
        self.notes.extend(other.notes);
    }
}
