//! Check verdicts with machine-readable witnesses.
//!
//! A [`Report`] is an ordered list of named checks. Every FAIL carries a
//! witness string (a residual polynomial, a rank table, or a counterexample
//! point). WARN marks conditions that hold at all sampled points but could
//! not be certified globally (e.g. rational closure coefficients whose
//! denominators might vanish off the sample set).

use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Warn,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Warn => "WARN",
            Verdict::Error => "ERROR",
        };
        f.write_str(s)
    }
}

/// One named check with its verdict and optional witness.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Option<String>,
    /// Wall time; shown in human-readable renderings only, never in the
    /// structured report (which must be byte-identical across runs).
    pub elapsed: Duration,
}

/// The two sign conventions every report is relative to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conventions {
    pub symplectic_sign: String,
    pub coadjoint_sign: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            symplectic_sign: "omega_can = sum_i dq_i ^ dp_i".to_string(),
            coadjoint_sign: "<ad*_u zeta, v> = -<zeta, [u, v]>".to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn pass(&mut self, name: &str) {
        self.push(name, Verdict::Pass, None);
    }

    pub fn fail(&mut self, name: &str, witness: impl Into<String>) {
        self.push(name, Verdict::Fail, Some(witness.into()));
    }

    pub fn warn(&mut self, name: &str, witness: impl Into<String>) {
        self.push(name, Verdict::Warn, Some(witness.into()));
    }

    pub fn push(&mut self, name: &str, verdict: Verdict, witness: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            verdict,
            witness,
            elapsed: Duration::ZERO,
        });
    }

    /// Record PASS when `ok`, FAIL with the given witness otherwise.
    pub fn assert_check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness());
        }
    }

    pub fn merge_prefixed(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    /// True when no check FAILed or ERRORed (WARN does not fail a report).
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.verdict, Verdict::Fail | Verdict::Error))
    }

    pub fn verdict_of(&self, name: &str) -> Option<Verdict> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.verdict)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| matches!(c.verdict, Verdict::Fail | Verdict::Error))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", c.verdict, c.name)?;
            if let Some(w) = &c.witness {
                write!(f, " [{w}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
