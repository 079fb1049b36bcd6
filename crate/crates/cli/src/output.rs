use std::fmt;
use std::io::Write;
use std::path::Path;

use cliffft_core::Error;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_TRUNCATION: u8 = 3;
pub const EXIT_VERIFICATION: u8 = 4;

/// A failure that stops the command before any result is written.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }

    pub fn other(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_OTHER,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Truncation { .. } => EXIT_TRUNCATION,
        Error::DimensionMismatch { .. }
        | Error::UnsupportedDimension { .. }
        | Error::GradeOutOfRange { .. }
        | Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::NotHomogeneous { .. }
        | Error::IndexOutOfRange(_)
        | Error::Serde(_) => EXIT_VALIDATION,
        Error::IllConditioned { .. } | Error::Degenerate(_) | Error::Io(_) => EXIT_OTHER,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::other(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::other(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::other(e.to_string())
    }
}

pub enum Body {
    /// Wrapped in the versioned envelope.
    Json(Value),
    Csv(String),
    Text(String),
}

/// What a command produced and the exit status it asks for.
pub struct Outcome {
    pub body: Body,
    pub code: u8,
}

impl Outcome {
    pub fn ok(body: Body) -> Self {
        Outcome { body, code: 0 }
    }
}

pub fn envelope(command: &str, config: &Value, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "timestamp": chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        "config": config,
        "result": result,
    })
}

pub fn dry_run(command: &str, config: &Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "dry_run": true,
        "config": config,
    })
}

pub fn write(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_table(header: &[String], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::other(e.to_string()))
}

/// Two aligned columns of name and value.
pub fn text_table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}

/// Flattens a JSON object into dotted keys for [`text_table`].
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => out.push((prefix.to_string(), num(f))),
            _ => out.push((prefix.to_string(), n.to_string())),
        },
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn flatten_nested() {
        let mut rows = Vec::new();
        flatten("", &json!({"a": {"b": 1, "c": 0.5}, "d": "x", "e": null}), &mut rows);
        let keys: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
        assert_eq!(keys, ["a.b", "a.c", "d", "e"]);
        assert!(text_table(&rows).lines().all(|l| l.len() >= 4));
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), EXIT_VALIDATION);
        assert_eq!(exit_code(&Error::Io("x".into())), EXIT_OTHER);
    }
}
