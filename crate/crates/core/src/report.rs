//! Pass/fail records produced by the sampled checks and the suites.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

/// Outcome of one sampled assertion.
///
/// `max_ratio` is the worst measured/allowed ratio over the samples; the check
/// passes when it does not exceed `limit` (1 plus any slack the check allows).
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    pub max_ratio: f64,
    pub limit: f64,
    pub worst_lambda: Option<Complex64>,
    pub detail: String,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, limit: f64) -> Self {
        CheckReport {
            name: name.into(),
            samples: 0,
            max_ratio: 0.0,
            limit,
            worst_lambda: None,
            detail: String::new(),
        }
    }

    /// Records one sample; NaN ratios count as failures.
    pub fn observe(&mut self, ratio: f64, lambda: Option<Complex64>) {
        self.samples += 1;
        if self.max_ratio.is_nan() {
            return;
        }
        if ratio.is_nan() || ratio > self.max_ratio {
            self.max_ratio = ratio;
            self.worst_lambda = lambda;
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn merge(&mut self, other: &CheckReport) {
        self.samples += other.samples;
        if self.max_ratio.is_nan() {
            return;
        }
        if other.max_ratio.is_nan() || other.max_ratio > self.max_ratio {
            self.max_ratio = other.max_ratio;
            self.worst_lambda = other.worst_lambda;
            self.detail = other.detail.clone();
        }
    }

    pub fn passed(&self) -> bool {
        self.max_ratio <= self.limit
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: samples={} max_ratio={:.6e} limit={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.max_ratio,
            self.limit
        )?;
        if let (false, Some(l)) = (self.passed(), self.worst_lambda) {
            write!(f, " at lambda={}{:+}i", l.re, l.im)?;
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// A named group of checks.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<CheckReport>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> Self {
        SuiteReport {
            name: name.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: CheckReport) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} [{}]",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for check in &self.checks {
            writeln!(f, "  {check}")?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}
