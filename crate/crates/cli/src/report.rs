//! The report emitted by every subcommand.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Uncertified,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Uncertified => "uncertified",
        }
    }
}

/// What a subcommand produced, before provenance is attached.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub residuals: Vec<(String, f64)>,
    pub outputs: Value,
    pub timing: Vec<(String, f64)>,
}

impl Outcome {
    pub fn new(status: Status, outputs: Value) -> Self {
        Outcome { status, residuals: Vec::new(), outputs, timing: Vec::new() }
    }

    pub fn residual(mut self, name: &str, value: f64) -> Self {
        self.residuals.push((name.to_string(), value));
        self
    }
}

/// Residuals are printed in scientific notation, which does not depend on
/// the locale.
pub fn number_text(x: f64) -> String {
    format!("{x:e}")
}

fn pairs_json(pairs: &[(String, f64)]) -> Value {
    Value::Object(pairs.iter().map(|(k, v)| (k.clone(), Value::String(number_text(*v)))).collect::<Map<_, _>>())
}

pub fn report_json(outcome: &Outcome, provenance: Value) -> Value {
    json!({
        "status": outcome.status.as_str(),
        "residuals": pairs_json(&outcome.residuals),
        "outputs": outcome.outputs,
        "timing": pairs_json(&outcome.timing),
        "provenance": provenance,
    })
}

pub fn error_json(category: &str, message: &str, provenance: Value) -> Value {
    json!({
        "status": "error",
        "error": { "category": category, "message": message },
        "provenance": provenance,
    })
}

/// Human-readable rendering of a JSON report.
pub fn report_text(report: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status: {}", report["status"].as_str().unwrap_or("?"));
    if let Some(err) = report.get("error") {
        let _ = writeln!(out, "error ({}): {}", err["category"].as_str().unwrap_or("?"), err["message"].as_str().unwrap_or(""));
        return out;
    }
    for section in ["residuals", "timing"] {
        if let Some(Value::Object(m)) = report.get(section) {
            if !m.is_empty() {
                let _ = writeln!(out, "{section}:");
                for (k, v) in m {
                    let _ = writeln!(out, "  {k} = {}", v.as_str().unwrap_or(""));
                }
            }
        }
    }
    let _ = writeln!(out, "outputs:");
    if let Some(Value::Object(m)) = report.get("outputs") {
        for (k, v) in m {
            let _ = writeln!(out, "  {k}: {v}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let o = Outcome::new(Status::Pass, json!({"z": 1, "a": 2})).residual("b", 1e-3).residual("a", 0.0);
        let text = serde_json::to_string(&report_json(&o, json!({}))).unwrap();
        assert!(text.find("\"a\":\"0e0\"").unwrap() < text.find("\"b\":\"1e-3\"").unwrap());
    }

    #[test]
    fn text_rendering() {
        let o = Outcome::new(Status::Uncertified, json!({"x": "1"})).residual("r", 0.5);
        let t = report_text(&report_json(&o, json!({})));
        assert!(t.starts_with("status: uncertified\nresiduals:\n  r = 5e-1\n"));
    }
}
