//! Rendering of verification results: a flat list of named checks with
//! expected and computed values, emitted as Markdown or as JSON with sorted
//! keys so reruns are byte-identical.

use serde::Serialize;

/// Debug rendering with the outer quotes of plain strings removed.
fn render<T: std::fmt::Debug>(v: &T) -> String {
    let s = format!("{v:?}");
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') && !s[1..s.len() - 1].contains('"')
    {
        s[1..s.len() - 1].to_string()
    } else {
        s
    }
}

/// One verified value.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    /// Stable dotted identifier, e.g. `h0.double.k6-triple`.
    pub id: String,
    /// Human-readable description of the quantity.
    pub subject: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

/// A full verification run.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn new(seed: u64) -> CheckReport {
        CheckReport {
            seed,
            results: Vec::new(),
        }
    }

    /// Record a check with an explicit verdict.
    pub fn record(
        &mut self,
        id: impl Into<String>,
        subject: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        pass: bool,
    ) {
        self.results.push(CheckResult {
            id: id.into(),
            subject: subject.into(),
            expected: expected.into(),
            computed: computed.into(),
            pass,
        });
    }

    /// Record a check that passes when both renderings agree.
    pub fn expect_eq<T: PartialEq + std::fmt::Debug>(
        &mut self,
        id: impl Into<String>,
        subject: impl Into<String>,
        expected: T,
        computed: T,
    ) {
        let pass = expected == computed;
        self.record(id, subject, render(&expected), render(&computed), pass);
    }

    /// Record a boolean condition.
    pub fn expect_true(&mut self, id: impl Into<String>, subject: impl Into<String>, ok: bool) {
        self.record(id, subject, "true", ok.to_string(), ok);
    }

    /// Record a lower bound.
    pub fn expect_at_least(
        &mut self,
        id: impl Into<String>,
        subject: impl Into<String>,
        bound: i64,
        computed: i64,
    ) {
        self.record(
            id,
            subject,
            format!(">= {bound}"),
            computed.to_string(),
            computed >= bound,
        );
    }

    /// Keep only the checks whose id or subject contains the needle.
    pub fn filtered(&self, needle: &str) -> CheckReport {
        CheckReport {
            seed: self.seed,
            results: self
                .results
                .iter()
                .filter(|r| r.id.contains(needle) || r.subject.contains(needle))
                .cloned()
                .collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.total() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str("# verification report\n\n");
        s.push_str(&format!("seed: {}\n\n", self.seed));
        s.push_str("| id | subject | expected | computed | status |\n");
        s.push_str("|----|---------|----------|----------|--------|\n");
        for r in &self.results {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                r.id,
                r.subject,
                r.expected,
                r.computed,
                if r.pass { "pass" } else { "FAIL" }
            ));
        }
        s.push_str(&format!(
            "\n{} checks, {} passed, {} failed\n",
            self.total(),
            self.passed(),
            self.failed()
        ));
        s
    }

    /// JSON rendering; keys appear in sorted order.
    pub fn to_json(&self) -> String {
        let value = serde_json::json!({
            "seed": self.seed,
            "total": self.total(),
            "passed": self.passed(),
            "failed": self.failed(),
            "checks": self.results,
        });
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    }
}
