//! Verification reports: a deterministic JSON document plus a text table.
//!
//! Everything outside the `timing` field is a pure function of the scenario
//! and the run configuration, so two runs with the same inputs produce
//! byte-identical JSON once that one field is dropped.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// How `value` relates to `threshold` for a passing check.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// value <= threshold
    Le,
    /// value >= threshold
    Ge,
    /// value == threshold exactly
    Eq,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Environment {
    pub seed: u64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Timing {
    pub unix_ms: u128,
    pub wall_ms: u128,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub input_digest: String,
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub timing: Timing,
}

impl Report {
    pub fn new(suite: impl Into<String>, input_digest: String, environment: Environment) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            suite: suite.into(),
            input_digest,
            environment,
            checks: Vec::new(),
            passed: false,
            timing: Timing {
                unix_ms: 0,
                wall_ms: 0,
            },
        }
    }

    fn push(&mut self, name: String, value: f64, threshold: f64, comparison: Comparison) {
        let holds = match comparison {
            Comparison::Le => value <= threshold,
            Comparison::Ge => value >= threshold,
            Comparison::Eq => value == threshold,
        };
        self.checks.push(CheckRecord {
            name,
            value,
            threshold,
            comparison,
            status: if holds { Status::Pass } else { Status::Fail },
            note: None,
        });
    }

    pub fn check_le(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.push(name.into(), value, threshold, Comparison::Le);
    }

    pub fn check_ge(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.push(name.into(), value, threshold, Comparison::Ge);
    }

    pub fn check_count(&mut self, name: impl Into<String>, value: u64, expected: u64) {
        self.push(name.into(), value as f64, expected as f64, Comparison::Eq);
    }

    pub fn check_exact(&mut self, name: impl Into<String>, deviation: f64) {
        self.push(name.into(), deviation, 0.0, Comparison::Eq);
    }

    pub fn inconclusive(&mut self, name: impl Into<String>, note: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            value: f64::NAN,
            threshold: f64::NAN,
            comparison: Comparison::Eq,
            status: Status::Inconclusive,
            note: Some(note.into()),
        });
    }

    pub fn annotate_last(&mut self, note: impl Into<String>) {
        if let Some(last) = self.checks.last_mut() {
            last.note = Some(note.into());
        }
    }

    /// Freezes the verdict and stamps the timing field.
    pub fn finish(&mut self, wall_ms: u128) {
        self.passed = self.checks.iter().all(|c| c.status == Status::Pass);
        self.timing = Timing {
            unix_ms: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0),
            wall_ms,
        };
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {}  seed {}  tol {:e}  trials {}{}",
            self.suite,
            self.environment.seed,
            self.environment.tol,
            self.environment.trials,
            match self.environment.depth {
                Some(d) => format!("  depth {d}"),
                None => String::new(),
            }
        );
        let name_width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0)
            .max(5);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "????",
            };
            let relation = match c.comparison {
                Comparison::Le => "<=",
                Comparison::Ge => ">=",
                Comparison::Eq => "==",
            };
            let _ = writeln!(
                out,
                "  {status}  {:<name_width$}  {:>12.5e} {relation} {:.5e}{}",
                c.name,
                c.value,
                c.threshold,
                match &c.note {
                    Some(n) => format!("  ({n})"),
                    None => String::new(),
                }
            );
        }
        let passed = self
            .checks
            .iter()
            .filter(|c| c.status == Status::Pass)
            .count();
        let _ = writeln!(
            out,
            "{}: {passed}/{} checks passed in {} ms",
            self.suite,
            self.checks.len(),
            self.timing.wall_ms
        );
        out
    }
}

/// Hex SHA-256 of the raw scenario bytes.
pub fn digest_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .fold(String::with_capacity(64), |mut acc, b| {
            let _ = write!(acc, "{b:02x}");
            acc
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> Environment {
        Environment {
            seed: 0,
            tol: 1e-10,
            depth: None,
            trials: 5,
        }
    }

    #[test]
    fn verdict_requires_every_check_to_pass() {
        let mut r = Report::new("demo", digest_hex(b"x"), env());
        r.check_le("small", 1e-12, 1e-10);
        r.check_count("count", 42, 42);
        r.finish(1);
        assert!(r.passed);

        let mut r = Report::new("demo", digest_hex(b"x"), env());
        r.check_le("small", 1e-12, 1e-10);
        r.check_le("large", 2.0, 1e-10);
        r.finish(1);
        assert!(!r.passed);
    }

    #[test]
    fn inconclusive_blocks_pass() {
        let mut r = Report::new("demo", digest_hex(b"x"), env());
        r.check_le("fine", 0.0, 1.0);
        r.inconclusive("unknown", "no sample available");
        r.finish(1);
        assert!(!r.passed);
    }

    #[test]
    fn json_is_deterministic_outside_timing() {
        let build = || {
            let mut r = Report::new("demo", digest_hex(b"payload"), env());
            r.check_le("norm", 3.25e-13, 1e-10);
            r.check_ge("detections", 50.0, 49.0);
            r.finish(7);
            r
        };
        let strip = |text: &str| {
            let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
            v.as_object_mut().unwrap().remove("timing");
            serde_json::to_string(&v).unwrap()
        };
        assert_eq!(strip(&build().to_json()), strip(&build().to_json()));
    }

    #[test]
    fn digest_is_stable_and_hex() {
        let d = digest_hex(b"abc");
        assert_eq!(d.len(), 64);
        assert_eq!(
            d,
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn text_table_mentions_failures() {
        let mut r = Report::new("demo", digest_hex(b"x"), env());
        r.check_le("too_big", 1.0, 1e-10);
        r.annotate_last("expected rounding level");
        r.finish(1);
        let text = r.render_text();
        assert!(text.contains("FAIL"));
        assert!(text.contains("too_big"));
        assert!(text.contains("expected rounding level"));
    }
}
