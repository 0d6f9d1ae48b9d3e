//! Findings, artifacts and the run manifest.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::CliError;

pub const FINDINGS_HEADER: &str = "check,expected,observed,tolerance,status";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for inspection without deciding the run.
    Note,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Note => "note",
        }
    }
}

/// One machine-checked claim.
#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
    pub status: Status,
}

impl Finding {
    pub fn new(
        check: impl Into<String>,
        expected: impl Into<String>,
        observed: impl Into<String>,
        tolerance: impl Into<String>,
        passed: bool,
    ) -> Self {
        Self {
            check: check.into(),
            expected: expected.into(),
            observed: observed.into(),
            tolerance: tolerance.into(),
            status: if passed { Status::Pass } else { Status::Fail },
        }
    }

    pub fn note(check: impl Into<String>, observed: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            expected: String::new(),
            observed: observed.into(),
            tolerance: String::new(),
            status: Status::Note,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn csv_row(&self) -> String {
        [
            &self.check,
            &self.expected,
            &self.observed,
            &self.tolerance,
            self.status.name(),
        ]
        .map(csv_field)
        .join(",")
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn findings_csv(findings: &[Finding]) -> String {
    let mut out = format!("{FINDINGS_HEADER}\n");
    for f in findings {
        out.push_str(&f.csv_row());
        out.push('\n');
    }
    out
}

/// A named output file.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        Self {
            name: name.into(),
            bytes: bytes.into(),
        }
    }

    pub fn sha256(&self) -> String {
        Sha256::digest(&self.bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// What a subcommand produced.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub findings: Vec<Finding>,
    pub artifacts: Vec<Artifact>,
    /// Lines echoed to standard output.
    pub summary: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.findings.iter().all(Finding::passed)
    }

    pub fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn check(&mut self, f: Finding) {
        self.findings.push(f);
    }

    pub fn file(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.artifacts.push(Artifact::new(name, bytes));
    }
}

pub(crate) fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
}

/// Plain `key = value` lines.
pub fn manifest_text(entries: &[(String, String)]) -> String {
    entries
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}
