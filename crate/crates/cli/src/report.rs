//! Report plumbing: one JSON document per run on stdout, with an optional CSV
//! projection of the per-check rows. Every report echoes the full parameter
//! set so a run can be reproduced from its own output.

use serde::Serialize;
use serde_json::{Map, Value};
use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check_id: String,
    pub inputs: String,
    pub value: String,
    pub expected: String,
    pub pass: bool,
    /// Diagnostic rows are reported but do not gate the exit code.
    pub required: bool,
}

impl CheckRow {
    pub fn new(
        check_id: impl Into<String>,
        inputs: impl Into<String>,
        value: impl Into<String>,
        expected: impl Into<String>,
        pass: bool,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            inputs: inputs.into(),
            value: value.into(),
            expected: expected.into(),
            pass,
            required: true,
        }
    }

    pub fn diagnostic(mut self) -> Self {
        self.required = false;
        self
    }
}

pub struct Report {
    command: String,
    params: Map<String, Value>,
    results: Map<String, Value>,
    checks: Vec<CheckRow>,
    started: Instant,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            params: Map::new(),
            results: Map::new(),
            checks: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn result_json(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn check(&mut self, row: CheckRow) {
        self.checks.push(row);
    }

    pub fn all_required_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass || !c.required)
    }

    pub fn emit(&self, csv_path: Option<&Path>) -> std::io::Result<()> {
        let doc = serde_json::json!({
            "tool": "mollify",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "params": Value::Object(self.params.clone()),
            "wall_time_ms": self.started.elapsed().as_secs_f64() * 1e3,
            "results": Value::Object(self.results.clone()),
            "checks": self.checks,
            "pass": self.all_required_pass(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
        if let Some(path) = csv_path {
            let mut f = File::create(path)?;
            writeln!(f, "check_id,inputs,value,expected,pass")?;
            for c in &self.checks {
                writeln!(
                    f,
                    "{},{},{},{},{}",
                    csv_field(&c.check_id),
                    csv_field(&c.inputs),
                    csv_field(&c.value),
                    csv_field(&c.expected),
                    c.pass
                )?;
            }
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
