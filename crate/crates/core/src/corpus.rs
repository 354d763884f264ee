//! Batch analysis of a directory of action files.
//!
//! Every `*.json` file other than `*.golden.json` is an instance. When
//! `name.golden.json` sits next to `name.json`, the rendered report must
//! match it byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionSpec;
use crate::error::{Error, Result};
use crate::report::{analyze, render_json, AnalysisOptions, SCHEMA_VERSION};
use crate::smoothness::RouteVerdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceStatus {
    Agree,
    Inconclusive,
    Error,
    GoldenMismatch,
    Violation,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    pub name: String,
    pub status: InstanceStatus,
    pub verdict: Option<RouteVerdict>,
    pub max_degree: Option<u32>,
    pub golden: Option<bool>,
    pub violations: Vec<String>,
    pub message: Option<String>,
}

impl InstanceOutcome {
    /// One-line human summary.
    pub fn line(&self) -> String {
        let status = serde_json::to_value(self.status).expect("status serializes");
        let verdict = self
            .verdict
            .map(|v| serde_json::to_value(v).expect("verdict serializes"));
        let mut line = format!(
            "{:<28} {:<16} {}",
            self.name,
            status.as_str().unwrap_or(""),
            verdict.as_ref().and_then(|v| v.as_str()).unwrap_or("-")
        );
        if let Some(m) = &self.message {
            line.push_str("  ");
            line.push_str(m);
        }
        line
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub schema: u32,
    pub instances: usize,
    pub agree: usize,
    pub inconclusive: usize,
    pub errors: usize,
    pub golden_mismatches: usize,
    pub violations: usize,
    pub outcomes: Vec<InstanceOutcome>,
}

impl CorpusSummary {
    /// 1 empty corpus or input error, 2 inconclusive, 3 golden mismatch,
    /// 4 failed consistency check, 0 otherwise. The most severe applies.
    pub fn exit_code(&self) -> i32 {
        if self.instances == 0 {
            1
        } else if self.violations > 0 {
            4
        } else if self.golden_mismatches > 0 {
            3
        } else if self.errors > 0 {
            1
        } else if self.inconclusive > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        render_json(self)
    }
}

/// Instance files in a corpus directory, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Error::Structure(format!("cannot read corpus directory {}: {}", dir.display(), e)))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".json") && !name.ends_with(".golden.json")
        })
        .collect();
    files.sort();
    Ok(files)
}

fn golden_path(path: &Path) -> PathBuf {
    path.with_extension("golden.json")
}

fn run_instance(path: &Path, options: &AnalysisOptions) -> InstanceOutcome {
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("?")
        .to_string();
    let mut outcome = InstanceOutcome {
        name,
        status: InstanceStatus::Error,
        verdict: None,
        max_degree: None,
        golden: None,
        violations: vec![],
        message: None,
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            outcome.message = Some(e.to_string());
            return outcome;
        }
    };
    let action = match ActionSpec::from_json(&text) {
        Ok(a) => a,
        Err(e) => {
            outcome.message = Some(e.to_string());
            return outcome;
        }
    };
    let report = match analyze(&action, options) {
        Ok(r) => r,
        Err(e) => {
            outcome.message = Some(e.to_string());
            return outcome;
        }
    };
    outcome.verdict = Some(report.smoothness.verdict);
    outcome.max_degree = Some(report.bounds.max_degree);
    outcome.violations = report.checks.violations().iter().map(|s| s.to_string()).collect();
    let golden = golden_path(path);
    if golden.exists() {
        let rendered = report.to_json();
        let same = fs::read_to_string(&golden).is_ok_and(|g| g == rendered);
        outcome.golden = Some(same);
    }
    outcome.status = if !outcome.violations.is_empty() {
        outcome.message = Some(format!("violated: {}", outcome.violations.join(", ")));
        InstanceStatus::Violation
    } else if outcome.golden == Some(false) {
        outcome.message = Some(format!("report differs from {}", golden.display()));
        InstanceStatus::GoldenMismatch
    } else if report.is_inconclusive() {
        let reasons: Vec<String> = report
            .inconclusive
            .iter()
            .map(|f| format!("{}: {}", f.stage, f.reason))
            .collect();
        outcome.message = Some(reasons.join("; "));
        InstanceStatus::Inconclusive
    } else {
        InstanceStatus::Agree
    };
    outcome
}

/// Analyzes every instance in `dir` on the current rayon pool.
pub fn run_corpus(dir: &Path, options: &AnalysisOptions) -> Result<CorpusSummary> {
    let files = corpus_files(dir)?;
    let outcomes: Vec<InstanceOutcome> = files.par_iter().map(|p| run_instance(p, options)).collect();
    let count = |s: InstanceStatus| outcomes.iter().filter(|o| o.status == s).count();
    Ok(CorpusSummary {
        schema: SCHEMA_VERSION,
        instances: outcomes.len(),
        agree: count(InstanceStatus::Agree),
        inconclusive: count(InstanceStatus::Inconclusive),
        errors: count(InstanceStatus::Error),
        golden_mismatches: count(InstanceStatus::GoldenMismatch),
        violations: count(InstanceStatus::Violation),
        outcomes,
    })
}
