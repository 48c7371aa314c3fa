//! Machine-readable check reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One check: `pass` holds exactly when `residual ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub check_id: String,
    pub paper_anchor: String,
    pub params: Value,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Entry {
    pub fn measured(id: &str, anchor: &str, params: Value, residual: f64, tolerance: f64) -> Self {
        Self {
            check_id: id.into(),
            paper_anchor: anchor.into(),
            params,
            residual: Some(residual),
            tolerance,
            pass: residual <= tolerance,
            error: None,
        }
    }

    /// A check that could not run; it counts as failed.
    pub fn errored(id: &str, anchor: &str, params: Value, tolerance: f64, error: String) -> Self {
        Self {
            check_id: id.into(),
            paper_anchor: anchor.into(),
            params,
            residual: None,
            tolerance,
            pass: false,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(entries: Vec<Entry>, wall_time: f64) -> Self {
        let summary = Summary {
            total: entries.len(),
            passed: entries.iter().filter(|e| e.pass).count(),
            wall_time,
        };
        Self { entries, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
