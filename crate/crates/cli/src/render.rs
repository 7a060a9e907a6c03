//! Report assembly and the two output formats. The structured format is a
//! stable JSON document (schema version 1) that is byte-identical for
//! identical (scenario, seed) inputs; wall times appear only in the
//! human-readable text rendering.

use std::collections::BTreeMap;

use polysym_core::report::{Check, Conventions, Verdict};
use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u64 = 1;

#[derive(Debug)]
pub struct ScenarioReport {
    pub name: String,
    pub kind: String,
    pub seed: u64,
    pub conventions: Conventions,
    pub checks: Vec<Check>,
    pub expect: BTreeMap<String, String>,
}

impl ScenarioReport {
    pub fn new(
        name: String,
        kind: String,
        seed: u64,
        checks: Vec<Check>,
        expect: BTreeMap<String, String>,
    ) -> Self {
        ScenarioReport {
            name,
            kind,
            seed,
            conventions: Conventions::default(),
            checks,
            expect,
        }
    }

    /// Checks whose outcome differs from the (annotated or default)
    /// expectation. Without an annotation, FAIL and ERROR are unexpected.
    pub fn unexpected(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| {
                let verdict = c.verdict.to_string();
                match self.expect.get(&c.name) {
                    Some(want) => &verdict != want,
                    None => matches!(c.verdict, Verdict::Fail | Verdict::Error),
                }
            })
            .collect()
    }

    pub fn has_errors(&self) -> bool {
        self.checks.iter().any(|c| matches!(c.verdict, Verdict::Error))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "scenario {} (kind {}, seed {})\n",
            self.name, self.kind, self.seed
        ));
        out.push_str(&format!(
            "  conventions: {} ; {}\n",
            self.conventions.symplectic_sign, self.conventions.coadjoint_sign
        ));
        let mut pass = 0;
        let mut fail = 0;
        let mut warn = 0;
        let mut error = 0;
        for c in &self.checks {
            match c.verdict {
                Verdict::Pass => pass += 1,
                Verdict::Fail => fail += 1,
                Verdict::Warn => warn += 1,
                Verdict::Error => error += 1,
            }
            let annotation = match self.expect.get(&c.name) {
                Some(want) if *want == c.verdict.to_string() => " (expected)",
                _ => "",
            };
            out.push_str(&format!(
                "  {} {}{}",
                c.verdict, c.name, annotation
            ));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" [{w}]"));
            }
            out.push_str(&format!(" ({:.1} ms)\n", c.elapsed.as_secs_f64() * 1e3));
        }
        let unexpected = self.unexpected();
        out.push_str(&format!(
            "  summary: {pass} pass, {fail} fail, {warn} warn, {error} error -> {}\n",
            if unexpected.is_empty() { "OK" } else { "UNEXPECTED" }
        ));
        for c in unexpected {
            out.push_str(&format!("  unexpected: {} {}\n", c.verdict, c.name));
        }
        out
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema_version: u64,
    scenario: &'a str,
    kind: &'a str,
    seed: u64,
    conventions: JsonConventions<'a>,
    checks: Vec<JsonCheck<'a>>,
    summary: JsonSummary,
}

#[derive(Serialize)]
struct JsonConventions<'a> {
    symplectic_sign: &'a str,
    coadjoint_sign: &'a str,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    name: &'a str,
    verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonSummary {
    pass: usize,
    fail: usize,
    warn: usize,
    error: usize,
    unexpected: Vec<String>,
}

/// Render a batch of scenario reports as one stable JSON array.
pub fn render_structured(reports: &[ScenarioReport]) -> String {
    let json: Vec<JsonReport> = reports
        .iter()
        .map(|r| {
            let mut summary = JsonSummary {
                pass: 0,
                fail: 0,
                warn: 0,
                error: 0,
                unexpected: r.unexpected().iter().map(|c| c.name.clone()).collect(),
            };
            for c in &r.checks {
                match c.verdict {
                    Verdict::Pass => summary.pass += 1,
                    Verdict::Fail => summary.fail += 1,
                    Verdict::Warn => summary.warn += 1,
                    Verdict::Error => summary.error += 1,
                }
            }
            JsonReport {
                schema_version: REPORT_SCHEMA_VERSION,
                scenario: &r.name,
                kind: &r.kind,
                seed: r.seed,
                conventions: JsonConventions {
                    symplectic_sign: &r.conventions.symplectic_sign,
                    coadjoint_sign: &r.conventions.coadjoint_sign,
                },
                checks: r
                    .checks
                    .iter()
                    .map(|c| JsonCheck {
                        name: &c.name,
                        verdict: c.verdict.to_string(),
                        witness: c.witness.as_deref(),
                        expected: r.expect.get(&c.name).map(|s| s.as_str()),
                    })
                    .collect(),
                summary,
            }
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_text(reports: &[ScenarioReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.render_text());
        out.push('\n');
    }
    out
}
