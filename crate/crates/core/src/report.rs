//! Structured run reports: schema-versioned JSON with stable key order.
//!
//! Timings are the only nondeterministic field and can be left out, so two
//! runs on the same inputs and budget give byte-identical reports.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// How a reported value was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grade {
    Exact,
    Numeric,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub grade: Grade,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    /// Where the computation comes from in the paper.
    pub anchor: Option<String>,
    pub budget: String,
    pub inputs: Vec<InputDigest>,
    pub stages: Vec<Stage>,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_millis: Option<u64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, budget: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "torsionkit".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            anchor: None,
            budget: budget.into(),
            inputs: vec![],
            stages: vec![],
            results: Value::Null,
            verdicts: vec![],
            total_millis: None,
        }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest { name: name.into(), sha256: sha256_hex(bytes) });
    }

    pub fn stage(&mut self, name: &str, count: usize, millis: Option<u64>) {
        self.stages.push(Stage { name: name.into(), count, millis });
    }

    pub fn verdict(&mut self, name: &str, status: Status, grade: Grade, detail: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), status, grade, detail: detail.into() });
    }

    pub fn any(&self, s: Status) -> bool {
        self.verdicts.iter().any(|v| v.status == s)
    }

    /// Drops timings, leaving only input-determined content.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.total_millis = None;
        for s in &mut r.stages {
            s.millis = None;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_and_layout() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        let mut r = Report::new("height", "default");
        r.stage("only", 1, Some(12));
        r.total_millis = Some(12);
        r.results = serde_json::json!({"b": 1, "a": 2});
        let a = r.without_timings().to_json();
        assert!(!a.contains("millis"));
        // Map keys come out sorted.
        assert!(a.find("\"a\"").unwrap() < a.find("\"b\"").unwrap());
        assert!(a.find("schema_version").unwrap() < a.find("verdicts").unwrap());
    }
}
