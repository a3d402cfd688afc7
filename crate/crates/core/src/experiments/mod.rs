//! Seeded Monte Carlo experiments and their output tables.
//!
//! Every experiment draws trial `i` of grid cell `c` from
//! `cell_seed(seed, c).trial(i)`, maps trials in parallel, and reduces the collected
//! per-trial values in index order. Output is therefore identical for any thread count.

mod runs;

use std::fmt::Write as _;

use serde::Serialize;

use crate::scalar::Scalar;
use crate::stats::{Estimate, LogLogFit};

pub use runs::{
    check_log_law, concentration_check, estimate_distribution, estimate_distribution_with,
    interval_trend, lower_bound_check, moment_check, moment_check_exhaustive, sweep_exponent,
    walk_nonreturn, walk_single, ExhaustiveMoments,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Distribution,
    Sweep,
    LogLaw,
    Moments,
    LowerBound,
    Concentration,
    HeuristicStat,
    Walk,
}

/// Everything needed to rerun an experiment bit for bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub k: Vec<usize>,
    pub t: Vec<usize>,
    pub m: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    /// Grid of walk lengths `N` or step counts.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<usize>,
    /// Window length of the interval heuristic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    pub backend: &'static str,
}

impl ExperimentSpec {
    pub(crate) fn new(kind: ExperimentKind, trials: u64, seed: u64, backend: &'static str) -> Self {
        ExperimentSpec {
            kind,
            k: vec![],
            t: vec![],
            m: vec![],
            s: None,
            n: vec![],
            c: None,
            trials,
            seed,
            backend,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

/// One line of an experiment table. Parameters that do not apply are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow<S> {
    pub stat: String,
    pub k: Option<usize>,
    pub t: Option<usize>,
    pub m: Option<usize>,
    pub s: Option<usize>,
    pub n: Option<usize>,
    pub estimate: S,
    pub ci_low: S,
    pub ci_high: S,
    pub count: u64,
    pub trials: u64,
}

/// Grid cell coordinates for a row.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Cell {
    pub k: Option<usize>,
    pub t: Option<usize>,
    pub m: Option<usize>,
    pub s: Option<usize>,
    pub n: Option<usize>,
}

impl<S: Scalar> ResultRow<S> {
    pub fn from_estimate(stat: &str, cell: Cell, e: &Estimate<S>) -> Self {
        ResultRow {
            stat: stat.to_string(),
            k: cell.k,
            t: cell.t,
            m: cell.m,
            s: cell.s,
            n: cell.n,
            estimate: e.estimate,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            count: e.count,
            trials: e.trials,
        }
    }

    /// A derived value without sampling error of its own.
    pub fn value(stat: &str, cell: Cell, value: S, trials: u64) -> Self {
        ResultRow {
            stat: stat.to_string(),
            k: cell.k,
            t: cell.t,
            m: cell.m,
            s: cell.s,
            n: cell.n,
            estimate: value,
            ci_low: value,
            ci_high: value,
            count: trials,
            trials,
        }
    }

    pub fn estimate(&self) -> Estimate<S> {
        Estimate {
            estimate: self.estimate,
            ci_low: self.ci_low,
            ci_high: self.ci_high,
            count: self.count,
            trials: self.trials,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult<S> {
    pub spec: ExperimentSpec,
    pub rows: Vec<ResultRow<S>>,
    pub fit: Option<LogLogFit<S>>,
    pub warnings: Vec<String>,
}

pub const CSV_HEADER: &str = "stat,k,t,m,s,n,estimate,ci_low,ci_high,count,trials";

impl<S: Scalar + Serialize> ExperimentResult<S> {
    pub(crate) fn new(spec: ExperimentSpec) -> Self {
        ExperimentResult {
            spec,
            rows: vec![],
            fit: None,
            warnings: vec![],
        }
    }

    /// Rows named `stat`, in table order.
    pub fn rows_named<'a>(&'a self, stat: &'a str) -> impl Iterator<Item = &'a ResultRow<S>> + 'a {
        self.rows.iter().filter(move |r| r.stat == stat)
    }

    /// The single row named `stat`.
    pub fn row<'a>(&'a self, stat: &'a str) -> Option<&'a ResultRow<S>> {
        self.rows_named(stat).next()
    }

    /// A `# spec: {...}` provenance line, `# warning:` lines, the header, then one line
    /// per row. Fit parameters appear as rows named `fit_slope`, `fit_intercept` and
    /// `fit_residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# spec: {}", self.spec.to_json()).expect("string write");
        for w in &self.warnings {
            writeln!(out, "# warning: {w}").expect("string write");
        }
        writeln!(out, "{CSV_HEADER}").expect("string write");
        for r in self.rows.iter().chain(&self.fit_rows()) {
            let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.stat,
                opt(r.k),
                opt(r.t),
                opt(r.m),
                opt(r.s),
                opt(r.n),
                r.estimate,
                r.ci_low,
                r.ci_high,
                r.count,
                r.trials
            )
            .expect("string write");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    fn fit_rows(&self) -> Vec<ResultRow<S>> {
        let Some(fit) = &self.fit else {
            return vec![];
        };
        let z = S::of(crate::stats::Z95);
        let points = fit.points as u64;
        let mut slope = ResultRow::value("fit_slope", Cell::default(), fit.slope, points);
        slope.ci_low = fit.slope - z * fit.slope_std_error;
        slope.ci_high = fit.slope + z * fit.slope_std_error;
        vec![
            slope,
            ResultRow::value("fit_intercept", Cell::default(), fit.intercept, points),
            ResultRow::value("fit_residual", Cell::default(), fit.residual, points),
        ]
    }
}
