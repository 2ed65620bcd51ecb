// SPDX-License-Identifier: Apache-2.0
//! The JSON report every subcommand prints, and the exit-code mapping.

use std::collections::BTreeMap;
use std::time::Instant;

use mbqc_core::sim::linalg::Matrix;
use mbqc_core::Error;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Serialize)]
pub struct CheckStatus {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub passed: bool,
    pub checks: Vec<CheckStatus>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

/// Collects checks and timings while a command runs.
pub struct Recorder {
    command: String,
    hasher: Sha256,
    checks: Vec<CheckStatus>,
    timings: BTreeMap<String, f64>,
    started: Instant,
}

impl Recorder {
    pub fn new(command: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        Recorder {
            command: command.to_string(),
            hasher,
            checks: Vec::new(),
            timings: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    /// Feeds an input (file contents or an argument) into the digest.
    pub fn input(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckStatus {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn time(&mut self, name: impl Into<String>, ms: f64) {
        self.timings.insert(name.into(), ms);
    }

    pub fn finish(mut self, result: Value, timings: bool) -> RunReport {
        let total = self.started.elapsed().as_secs_f64() * 1e3;
        self.timings.insert("total".into(), total);
        let digest = self.hasher.finalize();
        RunReport {
            passed: self.checks.iter().all(|c| c.passed),
            command: self.command,
            inputs_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
            checks: self.checks,
            result,
            timings_ms: timings.then_some(self.timings),
        }
    }
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. }
            | Error::QubitCap { .. }
            | Error::ZeroProbability { .. }
            | Error::Nondeterministic(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(format!("parse error: {e}"))
    }
}

pub type CmdResult = Result<RunReport, Failure>;

/// Rounds away floating-point dust so reports print stably.
pub fn tidy(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Rows of `[re, im]` pairs.
pub fn matrix_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| {
            Value::Array(
                (0..m.ncols())
                    .map(|c| json!([tidy(m[(r, c)].re), tidy(m[(r, c)].im)]))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}
