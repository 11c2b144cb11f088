use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Summary plus every record.
    #[default]
    Records,
    /// Summary only.
    Summary,
}

/// A versioned report: `{schema, version, passed, summary, records}`.
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub summary: Value,
    pub records: Value,
}

impl Report {
    pub fn new(command: &'static str, passed: bool, summary: Value, records: impl Serialize) -> Self {
        let records = serde_json::to_value(records).expect("records serialize");
        Report { command, passed, summary, records }
    }

    pub fn to_value(&self, format: Format) -> Value {
        let mut v = json!({
            "schema": format!("kuratree/{}", self.command),
            "version": SCHEMA_VERSION,
            "passed": self.passed,
            "summary": self.summary,
        });
        if format == Format::Records {
            v["records"] = self.records.clone();
        }
        v
    }

    pub fn write(&self, format: Format, out: Option<&Path>) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_value(format)).expect("report serializes");
        text.push('\n');
        match out {
            Some(p) => std::fs::write(p, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}
