//! Run reports: one record per assertion, serialised as JSON or CSV.

use std::fmt;

use anyhow::Result;
use serde::{Deserialize, Serialize};

/// An expected or observed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Flag(bool),
    Number(f64),
    Text(String),
}

impl From<bool> for Quantity {
    fn from(b: bool) -> Self {
        Quantity::Flag(b)
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        // JSON has no infinities or NaN.
        if x.is_finite() {
            Quantity::Number(x)
        } else {
            Quantity::Text(x.to_string())
        }
    }
}

impl From<usize> for Quantity {
    fn from(n: usize) -> Self {
        Quantity::Number(n as f64)
    }
}

impl From<&str> for Quantity {
    fn from(s: &str) -> Self {
        Quantity::Text(s.to_owned())
    }
}

impl From<String> for Quantity {
    fn from(s: String) -> Self {
        Quantity::Text(s)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Flag(b) => write!(f, "{b}"),
            Quantity::Number(x) => write!(f, "{x:?}"),
            Quantity::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub id: String,
    pub description: String,
    pub expected: Quantity,
    pub actual: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Assertion {
    /// `|actual - expected| <= tol`.
    pub fn close(id: &str, description: impl Into<String>, expected: f64, actual: f64, tol: f64) -> Self {
        Assertion {
            id: id.to_owned(),
            description: description.into(),
            expected: expected.into(),
            actual: actual.into(),
            tolerance: Some(tol),
            pass: (actual - expected).abs() <= tol,
        }
    }

    /// `actual <= bound`.
    pub fn at_most(id: &str, description: impl Into<String>, bound: f64, actual: f64) -> Self {
        Assertion {
            id: id.to_owned(),
            description: description.into(),
            expected: format!("<= {bound:?}").into(),
            actual: actual.into(),
            tolerance: None,
            pass: actual <= bound,
        }
    }

    /// `actual > bound`.
    pub fn above(id: &str, description: impl Into<String>, bound: f64, actual: f64) -> Self {
        Assertion {
            id: id.to_owned(),
            description: description.into(),
            expected: format!("> {bound:?}").into(),
            actual: actual.into(),
            tolerance: None,
            pass: actual > bound,
        }
    }

    pub fn equal(id: &str, description: impl Into<String>, expected: impl Into<Quantity>, actual: impl Into<Quantity>) -> Self {
        let (expected, actual) = (expected.into(), actual.into());
        Assertion { id: id.to_owned(), description: description.into(), pass: expected == actual, expected, actual, tolerance: None }
    }

    /// A value recorded for inspection; always passes.
    pub fn observed(id: &str, description: impl Into<String>, actual: impl Into<Quantity>) -> Self {
        Assertion {
            id: id.to_owned(),
            description: description.into(),
            expected: "reported only".into(),
            actual: actual.into(),
            tolerance: None,
            pass: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub assertions: Vec<Assertion>,
    /// Left out unless timing was requested, so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(suite: &str, seed: u64, assertions: Vec<Assertion>) -> Self {
        RunReport { suite: suite.to_owned(), seed, pass: assertions.iter().all(|a| a.pass), assertions, wall_time_ms: None }
    }

    pub fn assertion(&self, id: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// One row per assertion, prefixed by the suite and seed.
pub fn to_csv(reports: &[RunReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["suite", "seed", "id", "description", "expected", "actual", "tolerance", "pass", "wall_time_ms"])?;
    for r in reports {
        let time = r.wall_time_ms.map(|t| t.to_string()).unwrap_or_default();
        for a in &r.assertions {
            w.write_record([
                r.suite.as_str(),
                &r.seed.to_string(),
                &a.id,
                &a.description,
                &a.expected.to_string(),
                &a.actual.to_string(),
                &a.tolerance.map(|t| format!("{t:?}")).unwrap_or_default(),
                &a.pass.to_string(),
                &time,
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Reports from one `report` invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    pub seed: u64,
    pub pass: bool,
    pub reports: Vec<RunReport>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport::new(
            "sample",
            7,
            vec![
                Assertion::close("a", "third", 1.0 / 3.0, 0.1 + 0.2 + 1.0 / 3.0 - 0.3, 1e-12),
                Assertion::equal("b", "flag, with a comma", true, false),
                Assertion::at_most("c", "bound", 1e-9, 3.0e-17),
                Assertion::observed("d", "note", "text"),
            ],
        )
    }

    #[test]
    fn overall_pass_needs_every_assertion() {
        let r = sample();
        assert!(!r.pass);
        assert_eq!(r.failures().map(|a| a.id.as_str()).collect::<Vec<_>>(), ["b"]);
        assert!(RunReport::new("x", 0, vec![Assertion::close("a", "", 1.0, 1.0, 0.0)]).pass);
    }

    #[test]
    fn json_round_trips_losslessly() {
        let mut r = sample();
        r.wall_time_ms = Some(12.5);
        let back: RunReport = serde_json::from_str(&to_json(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn non_finite_values_become_text() {
        assert_eq!(Quantity::from(f64::INFINITY), Quantity::Text("inf".into()));
    }

    #[test]
    fn csv_quotes_fields() {
        let text = to_csv(&[sample()]).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("\"flag, with a comma\""));
    }
}
