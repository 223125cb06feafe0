//! Line-delimited JSON reports. Records carry no timing so that identical
//! runs produce identical files.

use std::io::{self, Write};

use drgeom::surd::QuadSurd;
use drgeom::{BigRational, Scalar};
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// 17 significant digits.
pub fn decimal(x: f64) -> String {
    format!("{x:.16e}")
}

/// A reported number: exact values as `rational + radical_coeff * sqrt(radicand)`
/// plus a decimal, floats as a decimal only.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Exact { rational: String, radical_coeff: String, radicand: u64, decimal: String },
    Float { decimal: String },
}

impl Value {
    pub fn surd(x: &QuadSurd) -> Self {
        Value::Exact {
            rational: x.rational.to_string(),
            radical_coeff: x.radical_coeff.to_string(),
            radicand: x.radicand,
            decimal: decimal(x.to_f64()),
        }
    }

    pub fn rational(x: &BigRational) -> Self {
        Value::surd(&QuadSurd::rational(x.clone()))
    }

    pub fn float(x: f64) -> Self {
        Value::Float { decimal: decimal(x) }
    }

    pub fn display(&self) -> String {
        match self {
            Value::Exact { rational, radical_coeff, radicand, decimal } => {
                if *radicand == 1 {
                    format!("{rational} ({decimal})")
                } else {
                    format!("{rational} + ({radical_coeff})*sqrt({radicand}) ({decimal})")
                }
            }
            Value::Float { decimal } => decimal.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    /// Which identity or example the check exercises.
    pub anchor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(suite: &'static str, name: impl Into<String>, pass: bool, anchor: &'static str) -> Self {
        Check {
            suite,
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual: None,
            value: None,
            anchor,
            note: None,
        }
    }

    /// Passes when `residual <= tol`.
    pub fn residual(suite: &'static str, name: impl Into<String>, residual: f64, tol: f64, anchor: &'static str) -> Self {
        let mut c = Check::new(suite, name, residual <= tol, anchor);
        c.residual = Some(residual);
        c
    }

    pub fn with_value(mut self, v: Value) -> Self {
        self.value = Some(v);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record<'a> {
    Config { suite: &'a str, config: &'a RunConfig },
    Check(&'a Check),
    Summary { suite: &'a str, passed: usize, failed: usize },
}

pub struct Report {
    pub suite: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn write_jsonl(&self, out: &mut impl Write) -> io::Result<()> {
        let mut line = |r: &Record| -> io::Result<()> {
            serde_json::to_writer(&mut *out, r)?;
            out.write_all(b"\n")
        };
        line(&Record::Config { suite: &self.suite, config: &self.config })?;
        for c in &self.checks {
            line(&Record::Check(c))?;
        }
        let failed = self.failed();
        line(&Record::Summary { suite: &self.suite, passed: self.checks.len() - failed, failed })
    }

    pub fn write_summary(&self, out: &mut impl Write, wall_time_s: f64) -> io::Result<()> {
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            write!(out, "{status:4}  {:10} {}", c.suite, c.name)?;
            if let Some(r) = c.residual {
                write!(out, "  residual {r:.3e}")?;
            }
            if let Some(v) = &c.value {
                write!(out, "  value {}", v.display())?;
            }
            if let Some(n) = &c.note {
                write!(out, "  [{n}]")?;
            }
            writeln!(out)?;
        }
        let failed = self.failed();
        writeln!(
            out,
            "suite {}: {} passed, {failed} failed in {wall_time_s:.2}s",
            self.suite,
            self.checks.len() - failed
        )
    }
}
