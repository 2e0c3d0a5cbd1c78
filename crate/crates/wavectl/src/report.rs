//! The JSON verification report and its validator.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    UsageError,
    VerificationFailed,
    Rejected,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::UsageError => 1,
            Status::VerificationFailed => 2,
            Status::Rejected => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

/// How the value is compared with the tolerance: `<=`, `>=` or `>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Max,
    Min,
    Above,
}

impl Bound {
    pub fn symbol(self) -> &'static str {
        match self {
            Bound::Max => "<=",
            Bound::Min => ">=",
            Bound::Above => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: Option<f64>,
    pub bound: Bound,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityRecord {
    pub t: String,
    pub l: String,
    /// `2T/L = p/q` in lowest terms.
    pub p: i64,
    pub q: i64,
    pub admissible: bool,
    pub c_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityRecord {
    pub name: String,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: Tool,
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub problem: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub results: BTreeMap<String, Value>,
    pub admissibility: Option<AdmissibilityRecord>,
    pub compatibility: Vec<CompatibilityRecord>,
    pub warnings: Vec<String>,
    pub failure: Option<Failure>,
    pub wall_clock_seconds: f64,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: Tool { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() },
            command: command.into(),
            status: Status::Verified,
            exit_code: 0,
            problem: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            checks: Vec::new(),
            results: BTreeMap::new(),
            admissibility: None,
            compatibility: Vec::new(),
            warnings: Vec::new(),
            failure: None,
            wall_clock_seconds: 0.0,
        }
    }

    /// Records `value <= tolerance`; a missing or NaN value fails.
    pub fn check_max(&mut self, name: &str, value: Option<f64>, tolerance: f64) {
        let passed = value.is_some_and(|v| v <= tolerance);
        self.push_check(name, value, Bound::Max, tolerance, passed);
    }

    /// Records `value >= tolerance`.
    pub fn check_min(&mut self, name: &str, value: Option<f64>, tolerance: f64) {
        let passed = value.is_some_and(|v| v >= tolerance);
        self.push_check(name, value, Bound::Min, tolerance, passed);
    }

    /// Records `value > tolerance`.
    pub fn check_above(&mut self, name: &str, value: Option<f64>, tolerance: f64) {
        let passed = value.is_some_and(|v| v > tolerance);
        self.push_check(name, value, Bound::Above, tolerance, passed);
    }

    fn push_check(&mut self, name: &str, value: Option<f64>, bound: Bound, tolerance: f64, passed: bool) {
        self.tolerances.insert(name.into(), tolerance);
        self.checks.push(Check { name: name.into(), value: value.filter(|v| v.is_finite()), bound, tolerance, passed });
    }

    pub fn result(&mut self, name: &str, value: impl Into<Value>) {
        self.results.insert(name.into(), value.into());
    }

    /// `None` and non-finite numbers become `null`.
    pub fn result_f64(&mut self, name: &str, value: Option<f64>) {
        let v = value.and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number);
        self.results.insert(name.into(), v);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.compatibility.iter().all(|c| c.passed)
    }

    pub fn finish(&mut self, status: Status, failure: Option<Failure>) {
        self.status = status;
        self.exit_code = status.exit_code();
        self.failure = failure;
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Validates, then writes.
    pub fn write_file(&self, path: &Path) -> Result<(), String> {
        let text = self.to_json();
        validate_text(&text)?;
        std::fs::write(path, text).map_err(|e| format!("cannot write report {}: {e}", path.display()))
    }
}

const STATUSES: [(&str, i64); 4] = [("verified", 0), ("usage_error", 1), ("verification_failed", 2), ("rejected", 3)];

const KEYS: [&str; 14] = [
    "schema_version",
    "tool",
    "command",
    "status",
    "exit_code",
    "problem",
    "tolerances",
    "checks",
    "results",
    "admissibility",
    "compatibility",
    "warnings",
    "failure",
    "wall_clock_seconds",
];

pub fn validate_text(text: &str) -> Result<(), String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("report is not JSON: {e}"))?;
    validate(&v)
}

/// Structural checks on a report document.
pub fn validate(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report must be an object")?;
    for k in KEYS {
        if !obj.contains_key(k) {
            return Err(format!("missing key `{k}`"));
        }
    }
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(format!("unexpected key `{k}`"));
    }
    if obj["schema_version"].as_u64() != Some(SCHEMA_VERSION as u64) {
        return Err(format!("schema_version must be {SCHEMA_VERSION}"));
    }
    let tool = obj["tool"].as_object().ok_or("`tool` must be an object")?;
    for k in ["name", "version"] {
        if !tool.get(k).is_some_and(Value::is_string) {
            return Err(format!("`tool.{k}` must be a string"));
        }
    }
    if !obj["command"].is_string() {
        return Err("`command` must be a string".into());
    }
    let status = obj["status"].as_str().ok_or("`status` must be a string")?;
    let code = STATUSES
        .iter()
        .find(|(s, _)| *s == status)
        .map(|(_, c)| *c)
        .ok_or_else(|| format!("unknown status `{status}`"))?;
    if obj["exit_code"].as_i64() != Some(code) {
        return Err(format!("exit_code does not match status `{status}`"));
    }
    let problem = obj["problem"].as_object().ok_or("`problem` must be an object")?;
    if !problem.values().all(Value::is_string) {
        return Err("`problem` values must be strings".into());
    }
    let tol = obj["tolerances"].as_object().ok_or("`tolerances` must be an object")?;
    if !tol.values().all(Value::is_number) {
        return Err("`tolerances` values must be numbers".into());
    }
    let checks = obj["checks"].as_array().ok_or("`checks` must be an array")?;
    let mut all_passed = true;
    for c in checks {
        let name = c.get("name").and_then(Value::as_str).ok_or("check without a name")?;
        let value = c.get("value").ok_or_else(|| format!("check `{name}` has no value"))?;
        if !(value.is_number() || value.is_null()) {
            return Err(format!("check `{name}`: value must be a number or null"));
        }
        if !c.get("bound").and_then(Value::as_str).is_some_and(|b| ["max", "min", "above"].contains(&b)) {
            return Err(format!("check `{name}`: bound must be `max`, `min` or `above`"));
        }
        let t = c.get("tolerance").and_then(Value::as_f64).ok_or_else(|| format!("check `{name}`: no tolerance"))?;
        if tol.get(name).and_then(Value::as_f64) != Some(t) {
            return Err(format!("check `{name}`: tolerance not echoed"));
        }
        let passed = c.get("passed").and_then(Value::as_bool).ok_or_else(|| format!("check `{name}`: no verdict"))?;
        all_passed &= passed;
    }
    if !obj["results"].is_object() {
        return Err("`results` must be an object".into());
    }
    match &obj["admissibility"] {
        Value::Null => {}
        Value::Object(a) => {
            for k in ["t", "l", "p", "q", "admissible", "c_s"] {
                if !a.contains_key(k) {
                    return Err(format!("admissibility record lacks `{k}`"));
                }
            }
        }
        _ => return Err("`admissibility` must be an object or null".into()),
    }
    let compat = obj["compatibility"].as_array().ok_or("`compatibility` must be an array")?;
    for c in compat {
        if !c.get("name").is_some_and(Value::is_string) || !c.get("passed").is_some_and(Value::is_boolean) {
            return Err("compatibility entries need `name` and `passed`".into());
        }
        all_passed &= c["passed"].as_bool() == Some(true);
    }
    if !obj["warnings"].as_array().is_some_and(|w| w.iter().all(Value::is_string)) {
        return Err("`warnings` must be an array of strings".into());
    }
    match &obj["failure"] {
        Value::Null => {
            if code != 0 {
                return Err("a failed run needs a `failure` record".into());
            }
        }
        Value::Object(f) => {
            if code == 0 {
                return Err("a verified run has no `failure` record".into());
            }
            for k in ["kind", "reason"] {
                if !f.get(k).is_some_and(Value::is_string) {
                    return Err(format!("`failure.{k}` must be a string"));
                }
            }
        }
        _ => return Err("`failure` must be an object or null".into()),
    }
    if code == 0 && !all_passed {
        return Err("status `verified` with a failed check".into());
    }
    if !obj["wall_clock_seconds"].as_f64().is_some_and(|s| s >= 0.0) {
        return Err("`wall_clock_seconds` must be a non-negative number".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_report_validates() {
        let r = Report::new("check");
        validate_text(&r.to_json()).unwrap();
    }

    #[test]
    fn key_order_is_declaration_order() {
        let text = Report::new("check").to_json();
        let pos: Vec<usize> = KEYS.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn failed_check_cannot_be_verified() {
        let mut r = Report::new("solve-line");
        r.check_max("terminal_sup_error", Some(1.0), 1e-6);
        assert!(validate_text(&r.to_json()).is_err());
        r.finish(Status::VerificationFailed, Some(Failure { kind: "tolerance".into(), reason: "x".into() }));
        validate_text(&r.to_json()).unwrap();
    }

    #[test]
    fn failure_needs_reason() {
        let mut r = Report::new("check");
        r.finish(Status::Rejected, None);
        assert!(validate_text(&r.to_json()).is_err());
    }

    #[test]
    fn nan_check_fails_and_serializes_as_null() {
        let mut r = Report::new("check");
        r.check_max("e", Some(f64::NAN), 1.0);
        assert!(!r.checks[0].passed);
        assert!(r.to_json().contains("\"value\": null"));
    }

    #[test]
    fn round_trips_through_serde() {
        let mut r = Report::new("solve-periodic");
        r.check_max("terminal_sup_error", Some(1e-12), 1e-8);
        r.result_f64("energy_drift", Some(3e-15));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
