use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use compdyn_core::schedule::ScheduleError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<&ScheduleError> for ErrorInfo {
    fn from(e: &ScheduleError) -> Self {
        let pos = |v: usize| (v > 0).then_some(v);
        ErrorInfo {
            code: e.kind.code().to_string(),
            message: e.message.clone(),
            line: pos(e.line),
            col: pos(e.col),
            witness: e.witness.clone(),
        }
    }
}

/// Machine-readable result of one invocation. Field order is fixed by the
/// struct and every map is ordered, so serialisation is deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub verb: &'static str,
    pub inputs: BTreeMap<&'static str, String>,
    pub parameters: BTreeMap<&'static str, Value>,
    pub rows: Vec<Value>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl ReportDocument {
    pub fn new(verb: &'static str) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            verb,
            inputs: BTreeMap::new(),
            parameters: BTreeMap::new(),
            rows: Vec::new(),
            summary: Summary { total: 0, passed: 0, failed: 0 },
            notes: Vec::new(),
            error: None,
        }
    }

    pub fn input(mut self, key: &'static str, value: impl Into<String>) -> Self {
        self.inputs.insert(key, value.into());
        self
    }

    pub fn param(mut self, key: &'static str, value: impl Serialize) -> Self {
        self.parameters.insert(key, serde_json::to_value(value).expect("plain data"));
        self
    }

    /// Appends a row; `passed = None` rows are informational and not counted.
    pub fn row(&mut self, value: impl Serialize, passed: Option<bool>) {
        self.rows.push(serde_json::to_value(value).expect("plain data"));
        if let Some(ok) = passed {
            self.summary.total += 1;
            if ok {
                self.summary.passed += 1;
            } else {
                self.summary.failed += 1;
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}
