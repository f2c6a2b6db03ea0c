use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::AlgebraError;

use super::analysis::{analyze_document, Analysis, Command, Flags};
use super::dsl::{parse_bytes, ParseError};

pub const SCHEMA: &str = "fibercone-report/1";

/// Carried by every report: inputs are graded, so local invariants are
/// computed from the homogeneous structure.
pub const SCOPE: &str = "homogeneous ideals of a standard graded ring; non-homogeneous input is rejected";

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_DEFECT: i32 = 4;

/// Exit status for a library error.
pub fn exit_code(e: &AlgebraError) -> i32 {
    match e {
        AlgebraError::Hypothesis(_)
        | AlgebraError::ContextMismatch
        | AlgebraError::ZeroPolynomial
        | AlgebraError::TooManyVariables { .. }
        | AlgebraError::Unsupported(_) => EXIT_HYPOTHESIS,
        AlgebraError::ResourceCap(_) => EXIT_RESOURCE,
        AlgebraError::Defect(_)
        | AlgebraError::DivisionByZero
        | AlgebraError::ArityMismatch(..)
        | AlgebraError::NotDivisible => EXIT_DEFECT,
    }
}

fn error_kind(e: &AlgebraError) -> &'static str {
    match exit_code(e) {
        EXIT_HYPOTHESIS => "hypothesis",
        EXIT_RESOURCE => "resource_cap",
        _ => "defect",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub expected: Vec<String>,
}

impl From<&ParseError> for ErrorReport {
    fn from(e: &ParseError) -> Self {
        ErrorReport {
            kind: "parse".into(),
            message: e.message.clone(),
            line: Some(e.line),
            column: Some(e.column),
            expected: e.expected.clone(),
        }
    }
}

impl From<&AlgebraError> for ErrorReport {
    fn from(e: &AlgebraError) -> Self {
        ErrorReport {
            kind: error_kind(e).into(),
            message: e.to_string(),
            line: None,
            column: None,
            expected: Vec::new(),
        }
    }
}

/// The document written by every command. Field names are fixed and
/// absent parts are `null`.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub scope: &'static str,
    pub command: String,
    pub seed: Option<String>,
    pub input: Option<String>,
    pub exit_code: i32,
    pub error: Option<ErrorReport>,
    pub result: Value,
    pub timing_ms: u64,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON with the timing field zeroed, for byte comparisons.
    pub fn to_json_untimed(&self) -> String {
        ReportDocument {
            timing_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    /// One `path  value` row per leaf, aligned.
    pub fn to_text(&self) -> String {
        let mut rows = vec![
            ("command".to_string(), self.command.clone()),
            ("exit_code".to_string(), self.exit_code.to_string()),
        ];
        if let Some(seed) = &self.seed {
            rows.push(("seed".into(), seed.clone()));
        }
        if let Some(e) = &self.error {
            let pos = match (e.line, e.column) {
                (Some(l), Some(c)) => format!(" at {}:{}", l, c),
                _ => String::new(),
            };
            rows.push(("error".into(), format!("{}{}: {}", e.kind, pos, e.message)));
            if !e.expected.is_empty() {
                rows.push(("expected".into(), e.expected.join(", ")));
            }
        }
        if let Value::Object(map) = &self.result {
            for (k, x) in map.iter().filter(|(k, _)| *k != "command" && *k != "seed") {
                flatten(k, x, &mut rows);
            }
        }
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let pad = width - k.chars().count();
            out.push_str(&k);
            out.push_str(&" ".repeat(pad + 2));
            out.push_str(&v);
            out.push('\n');
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{}.{}", prefix, k)
                };
                flatten(&p, x, rows);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            rows.push((prefix.to_string(), format!("[{}]", parts.join(", "))));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{}[{}]", prefix, i), x, rows);
            }
        }
        Value::Null => {}
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Replace every JSON number by its exact decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(items) => Value::Array(items.into_iter().map(stringify_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, x)| (k, stringify_numbers(x))).collect()),
        other => other,
    }
}

/// The `result` payload of an analysis.
pub fn analysis_value(a: &Analysis) -> Value {
    stringify_numbers(serde_json::to_value(a).expect("analyses serialize"))
}

/// Parse `input`, run `command`, and package the outcome with its exit code.
pub fn run_command(input: &[u8], command: Command, flags: &Flags) -> ReportDocument {
    let start = Instant::now();
    let mut report = ReportDocument {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        scope: SCOPE,
        command: command.name().to_string(),
        seed: flags.seed.map(|s| s.to_string()),
        input: None,
        exit_code: EXIT_OK,
        error: None,
        result: Value::Null,
        timing_ms: 0,
    };
    match parse_bytes(input) {
        Err(e) => {
            report.exit_code = EXIT_PARSE;
            report.error = Some(ErrorReport::from(&e));
        }
        Ok(doc) => {
            report.input = Some(doc.to_string());
            match analyze_document(&doc, command, flags) {
                Ok(a) => {
                    report.seed = Some(a.seed.to_string());
                    report.result = analysis_value(&a);
                }
                Err(e) => {
                    report.exit_code = exit_code(&e);
                    report.error = Some(ErrorReport::from(&e));
                }
            }
        }
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_become_strings() {
        let v = serde_json::json!({"a": 1, "b": [-2, true, null], "c": {"d": 30}});
        assert_eq!(
            stringify_numbers(v),
            serde_json::json!({"a": "1", "b": ["-2", true, null], "c": {"d": "30"}})
        );
    }

    #[test]
    fn exit_codes() {
        let flags = Flags::default();
        assert_eq!(
            run_command(b"ideal I = ;", Command::Rednum, &flags).exit_code,
            EXIT_PARSE
        );
        let r = run_command(b"ring R = QQ[x,y];\nideal I = x^2+y, y^2;", Command::Rednum, &flags);
        assert_eq!(r.exit_code, EXIT_HYPOTHESIS);
        let r = run_command(b"ring R = QQ[x,y];\nideal I = x^2, x*y;", Command::Rednum, &flags);
        assert_eq!(r.exit_code, EXIT_HYPOTHESIS);
        let r = run_command(
            b"ring R = QQ[x,y];\nideal I = x^2, y^2;\nideal J = x^2, y^2;",
            Command::Rednum,
            &flags,
        );
        assert_eq!(r.exit_code, EXIT_OK, "{:?}", r.error);
        assert_eq!(r.result["reduction"]["r"], "0");
        assert_eq!(r.result["amm"], Value::Null);
    }

    #[test]
    fn cap_errors_exit_with_three() {
        let doc =
            b"ring R = QQ[x,y];\nideal I = x^3, x*y^2, y^3, x^2*y;\nideal J = x^3, y^3;\noption reduction_cap = 0;";
        let r = run_command(doc, Command::Rednum, &Flags::default());
        assert_eq!(r.exit_code, EXIT_RESOURCE);
    }
}
