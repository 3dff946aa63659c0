//! Numeric checks of the growth inequalities and Wronskian identities, each
//! reported row by row with its slack.

mod growth;
mod wronskian;

pub use growth::{check_lemma_3_1, check_smt, check_thm_2_5, distinct_targets};
pub use wronskian::{
    check_lemma_3_2, check_lemma_3_3, check_pw_invariance, check_pw_shift, diff_polynomial_chain, wronskian_numeric, DiffChain,
};

use serde::Serialize;

/// Largest intercept the slack model may use before charging the log term.
pub const C0_MAX: f64 = 20.0;
/// Largest admissible log coefficient.
pub const C1_MAX: f64 = 20.0;
/// Allowance for quadrature error in zero-slack checks.
pub const ZERO_SLACK_TOL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginRow {
    pub label: String,
    /// Radius, or `|z0|` for pointwise checks.
    pub r: f64,
    /// Sample point for pointwise checks.
    pub point: Option<[f64; 2]>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// How far below zero the slack may go for this row.
    pub allowance: f64,
    pub ok: bool,
}

impl MarginRow {
    pub fn new(label: impl Into<String>, r: f64, lhs: f64, rhs: f64) -> Self {
        Self { label: label.into(), r, point: None, lhs, rhs, slack: rhs - lhs, allowance: 0.0, ok: true }
    }

    pub fn at(mut self, z: crate::C64) -> Self {
        self.point = Some([z.re, z.im]);
        self
    }
}

/// `slack ≥ −(C0 + C1·log(r·T(r)))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlackModel {
    pub c0: f64,
    pub c1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub label: String,
    pub r: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginReport {
    pub name: String,
    pub rows: Vec<MarginRow>,
    pub verdict: Verdict,
    pub slack_model: Option<SlackModel>,
    pub diagnostics: Vec<Diagnostic>,
    pub notes: Vec<String>,
}

impl MarginReport {
    /// Every row must satisfy `slack ≥ −tol`.
    pub fn zero_slack(name: &str, mut rows: Vec<MarginRow>, tol: f64) -> Self {
        for row in &mut rows {
            row.allowance = tol;
            row.ok = row.slack >= -tol && row.slack.is_finite();
        }
        let verdict = if rows.iter().all(|r| r.ok) { Verdict::Pass } else { Verdict::Fail };
        Self { name: name.into(), rows, verdict, slack_model: None, diagnostics: Vec::new(), notes: Vec::new() }
    }

    /// Fit the slack model to the rows, with `log_terms[i] = log(max(r·T(r), e))`.
    pub fn with_slack_model(name: &str, mut rows: Vec<MarginRow>, log_terms: &[f64]) -> Self {
        let model = fit_slack_model(&rows, log_terms);
        for (row, &x) in rows.iter_mut().zip(log_terms) {
            row.allowance = model.c0 + model.c1 * x;
            row.ok = row.slack.is_finite() && row.slack >= -row.allowance * (1.0 + 1e-12);
        }
        let pass = model.c1 <= C1_MAX && rows.iter().all(|r| r.ok);
        Self {
            name: name.into(),
            rows,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            slack_model: Some(model),
            diagnostics: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// Smallest `C1` that lets `C0 ≤ C0_MAX` absorb every deficit, then the
/// smallest `C0` for that `C1`.
pub fn fit_slack_model(rows: &[MarginRow], log_terms: &[f64]) -> SlackModel {
    let deficits: Vec<(f64, f64)> = rows.iter().zip(log_terms).map(|(r, &x)| ((-r.slack).max(0.0), x)).collect();
    let c1 = deficits.iter().map(|&(d, x)| (d - C0_MAX) / x).fold(0.0, f64::max);
    let c0 = deficits.iter().map(|&(d, x)| d - c1 * x).fold(0.0, f64::max);
    SlackModel { c0, c1 }
}

/// `log(max(r·T, e))`, the growth gauge of the slack model.
pub fn log_gauge(r: f64, t: f64) -> f64 {
    (r * t).max(std::f64::consts::E).ln()
}
