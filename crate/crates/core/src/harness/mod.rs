//! Executable property checks for the integral.
//!
//! Each check runs a batch of cases against the driver and produces a
//! [`PropertyReport`]: pass/fail, tolerances used, and one reproducible
//! failure record per violated case (re-running a failure's seed
//! reproduces it). Checks never loosen themselves to pass — a failure
//! indicates an implementation bug, not a falsified property.

mod algebraic;
mod convergence;
mod ftc;
mod henstock;
mod parts;
pub mod suites;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gauge::GaugeSequence;
use crate::integrand::Integrand;
use crate::integrator::{integrate_sequential, ConvergenceReport, StoppingRule};
use crate::interval::Interval;
use crate::partitioner::TagPolicy;

pub use algebraic::check_algebraic;
pub use convergence::{check_monotone_convergence, check_uniform_convergence, FamilySpec};
pub use ftc::{check_ftc, FtcOptions};
pub use henstock::check_henstock_lemma;
pub use parts::{check_parts_and_substitution, PartsInput};
pub use suites::{run_suite, Suite};

/// One failed case: the seed that reproduces it and what went wrong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub seed: u64,
    pub detail: String,
}

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyReport {
    pub property_id: String,
    pub cases: u64,
    pub failures: Vec<CaseFailure>,
    pub tolerances: BTreeMap<String, f64>,
    pub passed: bool,
}

impl PropertyReport {
    pub fn one_line(&self) -> String {
        format!(
            "{} {} ({} cases, {} failures)",
            if self.passed { "PASS" } else { "FAIL" },
            self.property_id,
            self.cases,
            self.failures.len()
        )
    }
}

/// Accumulates case outcomes into a [`PropertyReport`].
pub(crate) struct ReportBuilder {
    property_id: String,
    cases: u64,
    failures: Vec<CaseFailure>,
    tolerances: BTreeMap<String, f64>,
}

impl ReportBuilder {
    pub fn new(property_id: impl Into<String>) -> Self {
        Self {
            property_id: property_id.into(),
            cases: 0,
            failures: Vec::new(),
            tolerances: BTreeMap::new(),
        }
    }

    pub fn tolerance(&mut self, name: &str, value: f64) -> &mut Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    /// Records one case. `outcome` carries the list of violated assertions
    /// (empty = pass); an `Err` from the machinery under test is recorded
    /// as a failure detail rather than aborting the whole check.
    pub fn case(&mut self, seed: u64, outcome: Result<Vec<String>>) {
        self.cases += 1;
        match outcome {
            Ok(violations) => {
                for detail in violations {
                    self.failures.push(CaseFailure { seed, detail });
                }
            }
            Err(e) => self.failures.push(CaseFailure {
                seed,
                detail: format!("driver error: {e}"),
            }),
        }
    }

    pub fn finish(self) -> PropertyReport {
        let passed = self.failures.is_empty();
        PropertyReport {
            property_id: self.property_id,
            cases: self.cases,
            failures: self.failures,
            tolerances: self.tolerances,
            passed,
        }
    }
}

/// Shared driver configuration for the checks, plus a fault-injection
/// hook: a nonzero estimate bias shifts every integral the harness
/// computes, which a healthy check battery must detect. Used by the
/// harness's own self-consistency tests.
#[derive(Debug, Clone)]
pub struct Harness {
    bias: f64,
}

impl Default for Harness {
    fn default() -> Self {
        Self::new()
    }
}

impl Harness {
    pub fn new() -> Self {
        Self { bias: 0.0 }
    }

    #[doc(hidden)]
    pub fn with_estimate_bias(bias: f64) -> Self {
        Self { bias }
    }

    pub(crate) fn bias(&self) -> f64 {
        self.bias
    }

    /// Hint-first random tags: the one policy that works for every gauge
    /// in the catalog, including those with special points.
    pub(crate) fn policy(seed: u64) -> TagPolicy {
        TagPolicy::hint_first(TagPolicy::RandomUniform { seed })
    }

    pub(crate) fn estimate(
        &self,
        f: &Integrand,
        gauges: &GaugeSequence,
        interval: Interval,
        rule: &StoppingRule,
        seed: u64,
    ) -> Result<(f64, ConvergenceReport)> {
        let report = integrate_sequential(f, gauges, interval, rule, &Self::policy(seed), seed)?;
        Ok((report.estimate + self.bias, report))
    }
}
