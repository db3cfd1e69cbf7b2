//! Numerical checks of the published values and identities, grouped into
//! sections. Each check records its value, target and tolerance so the result
//! can be printed as a pass/fail table.

mod sections;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theta::ThetaOptions;

pub use sections::SECTIONS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReproduceError {
    #[error("unknown section '{0}'; known: {1}")]
    UnknownSection(String, String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Option<f64>,
    /// Human-readable target, e.g. `= 4 ± 1e-3` or `< 64`.
    pub target: String,
    pub tol: Option<f64>,
    pub detail: String,
}

impl Check {
    pub fn approx(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            passed: (value - expected).abs() <= tol,
            value: Some(value),
            target: format!("= {expected} ± {tol:e}"),
            tol: Some(tol),
            detail: String::new(),
        }
    }

    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            passed: value <= bound + tol,
            value: Some(value),
            target: format!("≤ {bound} + {tol:e}"),
            tol: Some(tol),
            detail: String::new(),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            passed: value >= bound - tol,
            value: Some(value),
            target: format!("≥ {bound} − {tol:e}"),
            tol: Some(tol),
            detail: String::new(),
        }
    }

    pub fn below(name: impl Into<String>, value: f64, bound: f64, margin: f64) -> Check {
        Check {
            name: name.into(),
            passed: value < bound - margin,
            value: Some(value),
            target: format!("< {bound} − {margin:e}"),
            tol: Some(margin),
            detail: String::new(),
        }
    }

    pub fn exact(name: impl Into<String>, value: usize, expected: usize) -> Check {
        Check {
            name: name.into(),
            passed: value == expected,
            value: Some(value as f64),
            target: format!("= {expected}"),
            tol: None,
            detail: String::new(),
        }
    }

    pub fn holds(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            value: None,
            target: "holds".into(),
            tol: None,
            detail: detail.into(),
        }
    }

    pub fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
        Check::holds(name, false, format!("error: {err}"))
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = detail.into();
        self
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}", if self.passed { "PASS" } else { "FAIL" }, self.name)?;
        if let Some(v) = self.value {
            write!(f, ": {v}")?;
        }
        write!(f, " (target {})", self.target)?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

pub struct Section {
    pub tag: &'static str,
    pub title: &'static str,
    pub run: fn(&ThetaOptions) -> Vec<Check>,
    /// Wall-clock budget in seconds, checked after the section has run.
    pub time_limit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionReport {
    pub tag: String,
    pub title: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn section_tags() -> Vec<&'static str> {
    SECTIONS.iter().map(|s| s.tag).collect()
}

/// Sections selected by `tag`; `all` selects every section.
pub fn resolve(tag: &str) -> Result<Vec<&'static Section>, ReproduceError> {
    if tag == "all" {
        return Ok(SECTIONS.iter().collect());
    }
    SECTIONS
        .iter()
        .find(|s| s.tag == tag)
        .map(|s| vec![s])
        .ok_or_else(|| ReproduceError::UnknownSection(tag.to_string(), format!("all, {}", section_tags().join(", "))))
}

pub fn run_section(section: &Section, opts: &ThetaOptions) -> SectionReport {
    let start = Instant::now();
    let mut checks = (section.run)(opts);
    let seconds = start.elapsed().as_secs_f64();
    if let Some(limit) = section.time_limit {
        // No value recorded, so that repeated runs report identical checks.
        checks.push(Check::holds(format!("runtime within {limit} s"), seconds <= limit, ""));
    }
    SectionReport {
        tag: section.tag.to_string(),
        title: section.title.to_string(),
        checks,
        seconds,
    }
}

pub fn run(tag: &str, opts: &ThetaOptions) -> Result<Vec<SectionReport>, ReproduceError> {
    Ok(resolve(tag)?.into_iter().map(|s| run_section(s, opts)).collect())
}
