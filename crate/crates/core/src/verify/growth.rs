use rayon::prelude::*;

use super::{log_gauge, Diagnostic, MarginReport, MarginRow, ZERO_SLACK_TOL};
use crate::combinatorics::sample_points;
use crate::error::{Error, Result};
use crate::local::zero_divisor;
use crate::mapping::{map_arith, pushforward, reciprocal_shift, MapOp};
use crate::nevanlinna::{counting, CharacteristicSample, Profile, RadiusGrid};
use crate::{Equation, Map, Target, Tolerances};

const LN2: f64 = std::f64::consts::LN_2;

/// Grid snapped away from the critical moduli of every profile.
fn joint_grid(grid: &RadiusGrid<f64>, profiles: &[&Profile<f64>]) -> RadiusGrid<f64> {
    let moduli: Vec<f64> = profiles.iter().flat_map(|p| p.critical().locations().map(|c| c.norm())).collect();
    grid.snapped_moduli(&moduli, Tolerances::default().radius)
}

fn samples(p: &Profile<f64>, grid: &RadiusGrid<f64>) -> Result<Vec<CharacteristicSample<f64>>> {
    grid.radii.par_iter().map(|&r| p.sample(r, grid.quadrature_points)).collect()
}

/// Errors when two targets agree on every branch at a set of sample points.
pub fn distinct_targets(eq: &Equation, targets: &[Target]) -> Result<()> {
    let points = sample_points(eq, 8, 7, |z, w| targets.iter().all(|t| t.expr.den().eval(z, w).norm() > 1e-6))?;
    let zs: Vec<_> = points.iter().map(|p| p.0).collect();
    for i in 0..targets.len() {
        for j in i + 1..targets.len() {
            if targets[i].expr.agrees_on_curve(&targets[j].expr, eq, &zs)? {
                return Err(Error::DuplicateTargets(i, j));
            }
        }
    }
    Ok(())
}

/// `T(W + h) ≤ T(W) + T(h) + log 2` and `T(W·h) ≤ T(W) + T(h)` on the grid,
/// with no slack allowance beyond quadrature error.
pub fn check_thm_2_5(eq: &Equation, h: &Map, grid: &RadiusGrid<f64>) -> Result<MarginReport> {
    let w = Map::w();
    let eqs = [
        eq.clone(),
        pushforward(h, eq)?,
        pushforward(&map_arith(MapOp::Add, &w, h)?, eq)?,
        pushforward(&map_arith(MapOp::Mul, &w, h)?, eq)?,
    ];
    let profiles = eqs.iter().map(Profile::new).collect::<Result<Vec<_>>>()?;
    let grid = joint_grid(grid, &profiles.iter().collect::<Vec<_>>());
    let t: Vec<Vec<CharacteristicSample<f64>>> = profiles.iter().map(|p| samples(p, &grid)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for (i, &r) in grid.radii.iter().enumerate() {
        let (tw, tm, ts, tp) = (t[0][i].T, t[1][i].T, t[2][i].T, t[3][i].T);
        rows.push(MarginRow::new("sum", r, ts, tw + tm + LN2));
        rows.push(MarginRow::new("product", r, tp, tw + tm));
    }
    Ok(MarginReport::zero_slack("thm2.5", rows, ZERO_SLACK_TOL))
}

/// `|m(Σ 1/(W − a_j)) − Σ m(1/(W − a_j))|` against the slack model.
pub fn check_lemma_3_1(eq: &Equation, targets: &[Target], grid: &RadiusGrid<f64>) -> Result<MarginReport> {
    if targets.is_empty() {
        return Err(Error::Precondition("at least one target is required".into()));
    }
    distinct_targets(eq, targets)?;
    let recips = targets.iter().map(|t| reciprocal_shift(&t.expr)).collect::<Result<Vec<_>>>()?;
    let mut sum = recips[0].clone();
    for r in &recips[1..] {
        sum = map_arith(MapOp::Add, &sum, r)?;
    }
    let base = Profile::new(eq)?;
    let total = Profile::new(&pushforward(&sum, eq)?)?;
    let parts = recips
        .iter()
        .map(|r| Profile::new(&pushforward(r, eq)?))
        .collect::<Result<Vec<_>>>()?;
    let mut all = vec![&base, &total];
    all.extend(parts.iter());
    let grid = joint_grid(grid, &all);
    let tw = samples(&base, &grid)?;
    let mt = samples(&total, &grid)?;
    let mp = parts.iter().map(|p| samples(p, &grid)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut gauges = Vec::new();
    for (i, &r) in grid.radii.iter().enumerate() {
        let parts_sum: f64 = mp.iter().map(|s| s[i].m).sum();
        rows.push(MarginRow::new("proximity-split", r, (mt[i].m - parts_sum).abs(), 0.0));
        gauges.push(log_gauge(r, tw[i].T));
    }
    Ok(MarginReport::with_slack_model("lemma3.1", rows, &gauges))
}

/// Both forms of the second main theorem on the grid: with the ramification
/// term and coefficient `q − 1 − ε`, and without it and coefficient
/// `q − 4v + 3 − ε`. Reports `T(a_j)/T(W)` as a smallness diagnostic.
pub fn check_smt(eq: &Equation, targets: &[Target], epsilon: f64, grid: &RadiusGrid<f64>) -> Result<MarginReport> {
    let q = targets.len();
    if q < 2 {
        return Err(Error::Precondition(format!("need at least 2 targets, got {q}")));
    }
    if !epsilon.is_finite() {
        return Err(Error::Precondition("epsilon must be finite".into()));
    }
    distinct_targets(eq, targets)?;
    let v = eq.v();
    let base = Profile::with_ramification(eq)?;
    let zeros = targets.iter().map(|t| zero_divisor(eq, t)).collect::<Result<Vec<_>>>()?;
    let target_profiles = targets
        .iter()
        .map(|t| Profile::new(&pushforward(&t.expr, eq)?))
        .collect::<Result<Vec<_>>>()?;
    let mut all = vec![&base];
    all.extend(target_profiles.iter());
    let grid = joint_grid(grid, &all);
    let w = samples(&base, &grid)?;
    let ta = target_profiles.iter().map(|p| samples(p, &grid)).collect::<Result<Vec<_>>>()?;

    let c1 = q as f64 - 1.0 - epsilon;
    let c2 = q as f64 - 4.0 * v as f64 + 3.0 - epsilon;
    let mut rows = Vec::new();
    let mut gauges = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, s) in w.iter().enumerate() {
        let r = s.r;
        let n_targets: f64 = zeros.iter().map(|d| counting(d, r, v)).sum::<Result<f64>>()?;
        rows.push(MarginRow::new("with-ramification", r, c1 * s.T, s.N + n_targets + 2.0 * s.Nx));
        rows.push(MarginRow::new("without-ramification", r, c2 * s.T, s.N + n_targets));
        let g = log_gauge(r, s.T);
        gauges.extend([g, g]);
        for (t, ta) in targets.iter().zip(&ta) {
            diagnostics.push(Diagnostic { label: format!("T(a)/T(W) {}", t.label), r, value: ta[i].T / s.T });
        }
    }
    let mut report = MarginReport::with_slack_model("smt", rows, &gauges);
    report.diagnostics = diagnostics;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        report.notes.push(format!("epsilon = {epsilon} lies outside (0, 1)"));
    }
    if targets.iter().any(|t| !t.asserted_small) {
        report.notes.push("some targets are not asserted small".into());
    }
    Ok(report)
}
