//! Executable checks of the structural inequalities and identities, with
//! pass/fail reports that record margins and the values behind failures.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub mod chebyshev;
pub mod checks;
pub mod coverage;
pub mod fixtures;
pub mod runner;

pub use chebyshev::{chebyshev_check_1d, chebyshev_check_multid, GridFn};
pub use checks::{
    check_circle_product, check_dimension_bound, check_funnel, check_line_comparison, check_pair,
    check_pairs_all, McOptions,
};
pub use fixtures::Suite;
pub use runner::{verify, Family};

/// Largest residual accepted for an equality.
pub const EQUALITY_TOL: f64 = 1e-9;

/// Largest negative slack accepted for an inequality.
pub const INEQUALITY_SLACK: f64 = 1e-10;

/// A gap counts as strict once it exceeds this multiple of the solver
/// tolerance (and `EQUALITY_TOL`).
pub const STRICT_FACTOR: f64 = 100.0;

/// Threshold above which an exact gap is called strict.
pub fn strict_threshold(solver_tol: f64) -> f64 {
    EQUALITY_TOL.max(STRICT_FACTOR * solver_tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Exact,
    MonteCarlo,
    Formula,
}

/// One network (or parameter set) examined by a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub id: String,
    /// Network descriptor or parameter summary.
    pub network: String,
    /// Partition, node indices or parameters.
    pub indices: serde_json::Value,
    pub times: Vec<f64>,
    pub method: Method,
    /// Smallest slack of the checked inequality over `t > 0`.
    pub min_margin: f64,
    /// Largest margin over the grid; strictness is claimed from this.
    pub max_margin: f64,
    /// Largest residual among the checked equalities.
    pub max_residual: f64,
    /// `"strict"` or `"equality"` where the check predicts one.
    pub predicted: Option<String>,
    pub observed: Option<String>,
    pub passed: bool,
}

/// A violated condition with the values that show it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub fixture: String,
    pub what: String,
    pub t: Option<f64>,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: String,
    pub method: Method,
    pub verdict: Verdict,
    pub fixtures: Vec<FixtureRecord>,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(theorem: impl Into<String>, method: Method) -> Self {
        Self {
            theorem: theorem.into(),
            method,
            verdict: Verdict::Pass,
            fixtures: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn fail(&mut self, fixture: &str, what: impl Into<String>, t: Option<f64>, values: &[(&str, f64)]) {
        self.failures.push(Failure {
            fixture: fixture.to_string(),
            what: what.into(),
            t,
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        });
        self.verdict = Verdict::Fail;
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Appends the fixtures, failures and notes of `other`.
    pub fn absorb(&mut self, other: CheckReport) {
        if other.verdict == Verdict::Fail {
            self.verdict = Verdict::Fail;
        }
        self.fixtures.extend(other.fixtures);
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Running min/max of a margin and max of residuals for one fixture.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Margins {
    pub min: f64,
    pub max: f64,
    pub residual: f64,
}

impl Default for Margins {
    fn default() -> Self {
        Self {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            residual: 0.0,
        }
    }
}

impl Margins {
    pub fn gap(&mut self, g: f64) {
        self.min = self.min.min(g);
        self.max = self.max.max(g);
    }

    pub fn residual(&mut self, r: f64) {
        self.residual = self.residual.max(r.abs());
    }
}
