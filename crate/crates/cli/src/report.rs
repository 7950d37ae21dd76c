//! Reports: one entry per executed request, rendered as JSON or text.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use holonomy_core::double::LawReport;
use holonomy_core::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

/// One named pass/fail line inside a verb result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failures: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool) -> Check {
        Check {
            name: name.into(),
            status: Status::of(ok),
            checked: None,
            failures: None,
            counterexample: None,
        }
    }

    pub fn with_detail(name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) -> Check {
        let mut c = Check::new(name, ok);
        if !ok {
            c.counterexample = Some(Value::String(detail()));
        }
        c
    }

    pub fn law(report: &LawReport) -> Check {
        Check {
            name: report.law.clone(),
            status: Status::of(report.passed()),
            checked: Some(report.checked),
            failures: Some(report.failures),
            counterexample: report
                .first_failure
                .as_ref()
                .map(|c| json!({ "index": c.index, "detail": c.detail })),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerbResult {
    pub verb: String,
    /// Where the request sits in the scenario, e.g. `requests[2]`.
    pub location: String,
    pub status: Status,
    pub values: Map<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl VerbResult {
    pub fn new(verb: &str, location: String) -> Self {
        VerbResult {
            verb: verb.to_string(),
            location,
            status: Status::Pass,
            values: Map::new(),
            checks: Vec::new(),
            error: None,
        }
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn failed(verb: &str, location: String, error: String) -> Self {
        let mut r = VerbResult::new(verb, location);
        r.status = Status::Error;
        r.error = Some(error);
        r
    }

    /// Status from the recorded checks.
    pub fn settle(mut self) -> Self {
        if self.status != Status::Error && self.checks.iter().any(|c| c.status != Status::Pass) {
            self.status = Status::Fail;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub status: Status,
    pub results: Vec<VerbResult>,
}

impl Report {
    pub fn new(scenario: &str, results: Vec<VerbResult>) -> Self {
        let status = if results.iter().any(|r| r.status == Status::Error) {
            Status::Error
        } else if results.iter().any(|r| r.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        Report {
            tool: "holonomy".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: scenario.into(),
            status,
            results,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} · scenario {}", self.tool, self.version, self.scenario);
        for r in &self.results {
            let _ = writeln!(out, "\n[{}] {} ({})", r.status.label(), r.verb, r.location);
            if let Some(e) = &r.error {
                let _ = writeln!(out, "  error: {e}");
            }
            for (k, v) in &r.values {
                write_value(&mut out, 2, k, v);
            }
            for c in &r.checks {
                let mut line = format!("  {} {}", c.status.label(), c.name);
                if let (Some(n), Some(f)) = (c.checked, c.failures) {
                    let _ = write!(line, " ({f} failures in {n})");
                }
                let _ = writeln!(out, "{line}");
                if let Some(ce) = &c.counterexample {
                    write_value(&mut out, 6, "counterexample", ce);
                }
            }
        }
        let _ = writeln!(out, "\noverall: {}", self.status.label());
        out
    }
}

fn write_value(out: &mut String, indent: usize, key: &str, v: &Value) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) if !m.is_empty() => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, x) in m {
                write_value(out, indent + 2, k, x);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{pad}{key}: {s}");
        }
        other => {
            let _ = writeln!(out, "{pad}{key}: {other}");
        }
    }
}

/// Radians rounded to 12 decimals so reports stay tidy and stable.
pub fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn phase_json(p: &Phase) -> Value {
    json!({ "turns": p.turns_string(), "radians": round12(p.radians()) })
}
