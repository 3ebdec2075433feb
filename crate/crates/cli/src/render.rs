//! Output rendering: one JSON line, or flattened `key: value` text.

use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::input::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub struct Sink {
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Sink {
    pub fn report<T: Serialize>(&self, value: &T) -> CliResult<()> {
        let body = match self.format {
            Format::Json => format!("{}\n", serde_json::to_string(value).map_err(|e| CliError(e.to_string()))?),
            Format::Text => {
                let v = serde_json::to_value(value).map_err(|e| CliError(e.to_string()))?;
                let mut out = String::new();
                flatten("", &v, &mut out);
                out
            }
        };
        self.write(&body)
    }

    pub fn write(&self, body: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => std::fs::write(path, body).map_err(|e| CliError(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(body.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError(format!("stdout: {e}")))
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                flatten(&key(k), item, out);
            }
        }
        Value::Array(items) => {
            if let Some(parts) = items.iter().map(scalar).collect::<Option<Vec<_>>>() {
                out.push_str(&format!("{prefix}: {}\n", parts.join(" ")));
            } else {
                for (i, item) in items.iter().enumerate() {
                    flatten(&key(&i.to_string()), item, out);
                }
            }
        }
        other => {
            let label = if prefix.is_empty() { "value" } else { prefix };
            out.push_str(&format!("{label}: {}\n", scalar(other).unwrap_or_default()));
        }
    }
}
