//! Run reports.
//!
//! A report is line-oriented text. The first line names the schema, every
//! other line is either a `[section]` header or `key: value`. The body is
//! followed by `digest: sha256=...` over the body bytes; timing and plot
//! names come after the digest and are not covered by it.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "qsplit-report/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub verdict: String,
    pub location: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, verdict: "pass".into(), location: None }
    }

    pub fn fail(name: impl Into<String>, location: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, verdict: "fail".into(), location: Some(location.into()) }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, location: impl Into<String>) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, location)
        }
    }

    pub fn with_verdict(mut self, verdict: impl Into<String>) -> Self {
        self.verdict = verdict.into();
        self
    }

    pub fn with_location(mut self, location: impl Into<String>) -> Self {
        self.location = Some(location.into());
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: Vec<String>,
    inputs: Vec<(String, String)>,
    params: Vec<(String, String)>,
    checks: Vec<Check>,
    sections: Vec<(String, Vec<(String, String)>)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { command, ..Default::default() }
    }

    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push((path.to_string(), sha256_hex(bytes)));
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Appends `key: value` to `section`, creating the section on first use.
    pub fn entry(&mut self, section: &str, key: impl ToString, value: impl ToString) {
        let pos = match self.sections.iter().position(|(s, _)| s == section) {
            Some(i) => i,
            None => {
                self.sections.push((section.to_string(), Vec::new()));
                self.sections.len() - 1
            }
        };
        self.sections[pos].1.push((key.to_string(), value.to_string()));
    }

    pub fn body(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, k: &str, v: &str| {
            writeln!(out, "{}: {}", k, one_line(v)).unwrap();
        };
        writeln!(out, "{SCHEMA}").unwrap();
        line(&mut out, "tool", &format!("qsplit {}", env!("CARGO_PKG_VERSION")));
        line(&mut out, "command", &self.command.join(" "));
        out.push_str("[inputs]\n");
        for (path, digest) in &self.inputs {
            line(&mut out, path, &format!("sha256={digest}"));
        }
        out.push_str("[parameters]\n");
        for (k, v) in &self.params {
            line(&mut out, k, v);
        }
        out.push_str("[checks]\n");
        for c in &self.checks {
            line(&mut out, &c.name, &c.verdict);
            if let Some(loc) = &c.location {
                line(&mut out, &format!("{}.location", c.name), loc);
            }
        }
        line(&mut out, "verdict", if self.passed() { "pass" } else { "fail" });
        for (name, entries) in &self.sections {
            writeln!(out, "[{name}]").unwrap();
            for (k, v) in entries {
                line(&mut out, k, v);
            }
        }
        out
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.body().as_bytes())
    }

    /// Body, digest line, then the optional trailer lines.
    pub fn render(&self, trailer: &[(String, String)]) -> String {
        let body = self.body();
        let mut out = body.clone();
        writeln!(out, "digest: sha256={}", sha256_hex(body.as_bytes())).unwrap();
        for (k, v) in trailer {
            writeln!(out, "{k}: {}", one_line(v)).unwrap();
        }
        out
    }
}

fn one_line(s: &str) -> String {
    s.replace('\n', " ")
}

/// `[a, b, c]` for a list of displayable values.
pub fn list<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    let items: Vec<String> = xs.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(vec!["split".into(), "--conn".into(), "a.conn".into()]);
        r.input("a.conn", b"size = 1\n");
        r.param("order", 64);
        r.param("prime", 3);
        r.check(Check::pass("divisibility"));
        r.entry("spectrum", "eigenvalue 0", "-1");
        r
    }

    #[test]
    fn layout() {
        let text = sample().render(&[]);
        assert!(text.starts_with("qsplit-report/1\n"));
        assert!(text.contains("\ndivisibility: pass\n"));
        assert!(text.contains("\norder: 64\nprime: 3\n"));
        assert!(text.contains("\na.conn: sha256="));
        for line in text.lines().skip(1) {
            assert!(line.starts_with('[') || line.contains(": "), "{line}");
        }
    }

    #[test]
    fn trailer_is_outside_the_digest() {
        let r = sample();
        let plain = r.render(&[]);
        let timed = r.render(&[("elapsed_ms".into(), "17".into())]);
        assert!(timed.starts_with(&plain));
        assert!(plain.ends_with(&format!("digest: sha256={}\n", r.digest())));
    }

    #[test]
    fn failing_check_sets_the_verdict() {
        let mut r = sample();
        r.check(Check::fail("extension", "order 1").with_verdict("obstructed at order 1"));
        let text = r.render(&[]);
        assert!(!r.passed());
        assert!(text.contains("extension: obstructed at order 1\nextension.location: order 1\nverdict: fail\n"));
    }
}
