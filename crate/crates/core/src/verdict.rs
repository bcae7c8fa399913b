use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Outcome of an analysis: pass/fail, a margin when one is meaningful, the
/// tolerance applied, witness data, and notes on how far the claim reaches
/// (e.g. "sampled sufficient-condition check").
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(check: impl Into<String>, pass: bool, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            pass,
            margin: None,
            tolerance,
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    /// Attaches a witness value. Values that fail to serialize are recorded as null.
    pub fn with_detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn detail(&self, key: &str) -> Option<&Value> {
        self.details.get(key)
    }

    pub fn detail_f64(&self, key: &str) -> Option<f64> {
        self.details.get(key).and_then(Value::as_f64)
    }
}
