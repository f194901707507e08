//! JSON check reports.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Bumped whenever a record field is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    /// Unique, sortable key: `suite/kind/subject`.
    pub tag: String,
    pub pair: String,
    pub n: u32,
    pub kind: String,
    pub status: CheckStatus,
    /// What was measured (residual, gap, surviving terms); compared
    /// against `tolerance`.
    pub metric: f64,
    pub tolerance: f64,
    /// Seconds.
    pub elapsed: f64,
    #[serde(default)]
    pub detail: String,
}

impl Record {
    pub fn new(tag: impl Into<String>, pair: impl Into<String>, n: u32, kind: &str) -> Record {
        Record { tag: tag.into(), pair: pair.into(), n, kind: kind.into(), status: CheckStatus::Fail, metric: 0.0, tolerance: 0.0, elapsed: 0.0, detail: String::new() }
    }

    /// Passes iff `metric <= tolerance` (and `metric` is a number).
    pub fn measured(mut self, metric: f64, tolerance: f64) -> Record {
        self.metric = if metric.is_finite() { metric } else { f64::MAX };
        self.tolerance = tolerance;
        self.status = if metric <= tolerance { CheckStatus::Pass } else { CheckStatus::Fail };
        self
    }

    pub fn with_status(mut self, ok: bool) -> Record {
        self.status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Record {
        self.detail = d.into();
        self
    }

    pub fn timed(mut self, secs: f64) -> Record {
        self.elapsed = secs;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub records: Vec<Record>,
}

impl Report {
    /// Sorts records by tag.
    pub fn new(suite: &str, seed: u64, mut records: Vec<Record>) -> Report {
        records.sort_by(|a, b| a.tag.cmp(&b.tag));
        let passed = records.iter().all(Record::passed);
        Report { schema_version: SCHEMA_VERSION, suite: suite.into(), seed, passed, records }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}
