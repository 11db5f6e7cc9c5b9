use std::fmt;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    SCHEMA_VERSION
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

/// Failure of a run, carrying the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or inputs (exit 2).
    Usage(String),
    Core(relent::Error),
    /// Reading or writing a file failed (exit 3).
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(relent::Error::NoConvergence { .. }) => 1,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io",
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        let mut error = json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Io { path, .. } = self {
            error["path"] = json!(path);
        }
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "error": error,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl From<relent::Error> for CliError {
    fn from(e: relent::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Entropy unit chosen by `--bits`.
#[derive(Clone, Copy, Debug)]
pub struct Units {
    pub bits: bool,
}

impl Units {
    pub fn name(self) -> &'static str {
        if self.bits {
            "bits"
        } else {
            "nats"
        }
    }

    pub fn h(self, nats: f64) -> f64 {
        if self.bits {
            nats / std::f64::consts::LN_2
        } else {
            nats
        }
    }

    pub fn hs(self, nats: &[f64]) -> Vec<f64> {
        nats.iter().map(|&x| self.h(x)).collect()
    }

    pub fn pair(self, (lo, hi): (f64, f64)) -> [f64; 2] {
        [self.h(lo), self.h(hi)]
    }
}

pub fn envelope(command: &str, params: Value, units: Units, result: Value) -> Value {
    json!({
        "schema_version": report_schema_version(),
        "command": command,
        "params": params,
        "unit": units.name(),
        "result": result,
    })
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports are plain JSON");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut out = String::new();
            flatten("", value, &mut out);
            out
        }
    }
}

/// One `path<TAB>value` line per leaf.
fn flatten(prefix: &str, value: &Value, out: &mut String) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => flatten_map(map, &join, out),
        Value::Array(items) if !items.is_empty() => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}\t{}\n", s.replace(['\t', '\n'], " "))),
        leaf => out.push_str(&format!("{prefix}\t{leaf}\n")),
    }
}

fn flatten_map(map: &Map<String, Value>, join: &dyn Fn(&str) -> String, out: &mut String) {
    for (k, v) in map {
        flatten(&join(k), v, out);
    }
}
