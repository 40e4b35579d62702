//! Machine-readable run reports shared by the CLI and the oracle suite.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// A disagreement or failed check, with enough data to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub detail: String,
    pub artifact: Value,
    /// A `catlogic` command line that reproduces the failure. When it names an artifact
    /// file, save `artifact` there: string artifacts verbatim, anything else as JSON.
    pub replay: String,
}

/// Failures kept per check; the count covers all of them.
pub const MAX_FAILURES_SHOWN: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub title: String,
    pub instances: usize,
    pub agreements: usize,
    pub passed: bool,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
    /// Check-specific counters, in a fixed order.
    pub stats: Vec<(String, usize)>,
}

impl CheckReport {
    pub fn new(id: &str, title: &str) -> Self {
        CheckReport {
            id: id.to_string(),
            title: title.to_string(),
            instances: 0,
            agreements: 0,
            passed: true,
            failure_count: 0,
            failures: Vec::new(),
            stats: Vec::new(),
        }
    }

    pub fn agree(&mut self) {
        self.instances += 1;
        self.agreements += 1;
    }

    pub fn disagree(&mut self, failure: Failure) {
        self.instances += 1;
        self.fail(failure);
    }

    /// A failure that is not tied to one counted instance.
    pub fn fail(&mut self, failure: Failure) {
        self.passed = false;
        self.failure_count += 1;
        if self.failures.len() < MAX_FAILURES_SHOWN {
            self.failures.push(failure);
        }
    }

    pub fn record(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        if ok {
            self.agree();
        } else {
            self.disagree(failure());
        }
    }

    pub fn stat(&mut self, name: &str, value: usize) {
        self.stats.push((name.to_string(), value));
    }

    /// Fails unless at least `min` instances were checked.
    pub fn require_instances(&mut self, min: usize) {
        if self.instances < min {
            self.fail(Failure {
                detail: format!("only {} instances, {min} required", self.instances),
                artifact: Value::Null,
                replay: String::new(),
            });
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    /// Command-specific result payload.
    pub result: Value,
    /// Only filled in on request, so that reports stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: Vec<String>, checks: Vec<CheckReport>, result: Value) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        RunReport { command, passed, checks, result, wall_time_ms: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "$ {}", self.command.join(" "));
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{verdict} {} {} ({}/{} agree)", c.id, c.title, c.agreements, c.instances);
            for (k, v) in &c.stats {
                let _ = writeln!(s, "    {k}: {v}");
            }
            for f in &c.failures {
                let _ = writeln!(s, "    failure: {}", f.detail);
                if !f.replay.is_empty() {
                    let _ = writeln!(s, "    replay: {}", f.replay);
                }
            }
        }
        if !self.result.is_null() {
            let _ = writeln!(s, "{}", serde_json::to_string_pretty(&self.result).expect("json"));
        }
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(s, "wall time: {ms} ms");
        }
        let _ = writeln!(s, "{}", if self.passed { "all checks passed" } else { "some checks failed" });
        s
    }
}
