//! Command results in JSON or plain-text form.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<CheckLine>,
    /// Only filled when timing was requested, so default output is reproducible.
    pub timing_ms: Option<f64>,
    pub output: Value,
    /// Human-readable rendering of `output`.
    pub text: String,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<Value>) {
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            witness: if passed { None } else { witness },
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "checks": self.checks,
            "output": self.output,
        });
        if let Some(ms) = self.timing_ms {
            v["timing_ms"] = json!(ms);
        }
        v
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command.join(" ")).unwrap();
        for d in &self.inputs {
            writeln!(s, "input: {} sha256={}", d.path, d.sha256).unwrap();
        }
        s.push('\n');
        s.push_str(&self.text);
        if !self.text.ends_with('\n') {
            s.push('\n');
        }
        if !self.checks.is_empty() {
            s.push_str("\nchecks:\n");
            for c in &self.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                match &c.witness {
                    Some(w) => writeln!(s, "  {mark} {}: {w}", c.name).unwrap(),
                    None => writeln!(s, "  {mark} {}", c.name).unwrap(),
                }
            }
        }
        if let Some(ms) = self.timing_ms {
            writeln!(s, "\ntime: {ms:.1} ms").unwrap();
        }
        s
    }
}
