//! Check records and reports.

use std::time::Duration;

use serde::Serialize;

use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `max_residual < tolerance`; NaN fails.
    pub fn residual(name: impl Into<String>, max: &MaxTracker, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: max.count > 0 && max.max < tolerance,
            max_residual: Some(max.max),
            tolerance: Some(tolerance),
            exact: None,
            witness: max.at.clone(),
            detail: None,
        }
    }

    pub fn exact(name: impl Into<String>, holds: bool, witness: Option<String>) -> Self {
        Check { name: name.into(), passed: holds, max_residual: None, tolerance: None, exact: Some(holds), witness, detail: None }
    }

    /// A failed check carrying the error that stopped it.
    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Check {
            name: name.into(),
            passed: false,
            max_residual: None,
            tolerance: None,
            exact: None,
            witness: Some(err.to_string()),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }
}

/// Running maximum of residuals with the location of the worst one.
#[derive(Debug, Clone, Default)]
pub struct MaxTracker {
    pub max: f64,
    pub at: Option<String>,
    pub count: usize,
}

impl MaxTracker {
    pub fn new() -> Self {
        MaxTracker::default()
    }

    pub fn update(&mut self, value: f64, at: impl FnOnce() -> String) {
        let v = value.abs();
        if self.count == 0 || v > self.max || v.is_nan() && !self.max.is_nan() {
            self.max = if v.is_nan() { f64::NAN } else { v };
            self.at = Some(at());
        }
        self.count += 1;
    }
}

/// A plot-ready table, written as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub verb: String,
    pub seed: u64,
    pub scenario: Scenario,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip)]
    pub runtime: Duration,
}

impl Report {
    pub fn new(scenario: &Scenario, verb: &str, checks: Vec<Check>, runtime: Duration) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report {
            suite: scenario.suite.name().to_string(),
            verb: verb.to_string(),
            seed: scenario.seed,
            scenario: scenario.clone(),
            checks,
            passed,
            runtime,
        }
    }

    /// The report without its runtime; identical across runs with the same
    /// scenario and seed.
    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The body followed by the runtime.
    pub fn full_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["runtime_seconds"] = serde_json::json!(self.runtime.as_secs_f64());
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| match (&c.max_residual, &c.witness) {
                (Some(r), _) => format!("{}: {} (max {r:e})", c.name, c.status()),
                (None, Some(w)) if !c.passed => format!("{}: {} ({w})", c.name, c.status()),
                _ => format!("{}: {}", c.name, c.status()),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracker_keeps_the_worst_point() {
        let mut t = MaxTracker::new();
        t.update(1e-12, || "a".into());
        t.update(-3e-10, || "b".into());
        t.update(2e-11, || "c".into());
        assert_eq!(t.max, 3e-10);
        assert_eq!(t.at.as_deref(), Some("b"));
        t.update(f64::NAN, || "d".into());
        assert!(t.max.is_nan());
        assert!(!Check::residual("x", &t, 1.0).passed);
    }

    #[test]
    fn empty_tracker_fails() {
        assert!(!Check::residual("x", &MaxTracker::new(), 1.0).passed);
    }
}
