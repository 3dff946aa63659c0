use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MarginReport, MarginRow};
use crate::combinatorics::{enumerate_monomials, numeric_rank, sample_points};
use crate::continuation::branch_series;
use crate::error::{Error, Result};
use crate::mapping::{map_arith, MapOp};
use crate::polyalg::{determinant, Series};
use crate::{Equation, Map, Target, C64};

const CHAIN_TOL: f64 = 1e-7;
const SCALING_TOL: f64 = 1e-8;
const INVARIANCE_TOL: f64 = 1e-6;

/// `W^{(n)}/W` as an integer polynomial in `u, u', u'', …` where `u = W'/W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffChain {
    n: usize,
    /// Exponent vector over `(u, u', …, u^{(n-1)})` to coefficient.
    terms: BTreeMap<Vec<u32>, i64>,
}

/// `R_1 = u`, `R_{t+1} = R_t' + R_t·u`.
pub fn diff_polynomial_chain(n: usize) -> DiffChain {
    let n = n.max(1);
    let mut first = vec![0; n];
    first[0] = 1;
    let mut terms = BTreeMap::from([(first, 1i64)]);
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for (e, &c) in &terms {
            for i in 0..n - 1 {
                if e[i] > 0 {
                    let mut d = e.clone();
                    d[i] -= 1;
                    d[i + 1] += 1;
                    *next.entry(d).or_insert(0) += c * i64::from(e[i]);
                }
            }
            let mut m = e.clone();
            m[0] += 1;
            *next.entry(m).or_insert(0) += c;
        }
        next.retain(|_, c| *c != 0);
        terms = next;
    }
    DiffChain { n, terms }
}

impl DiffChain {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    /// Evaluate from `u_derivs = [u, u', …]` (at least `n` entries).
    pub fn eval(&self, u_derivs: &[C64]) -> Result<C64> {
        if u_derivs.len() < self.n {
            return Err(Error::Precondition(format!("need {} derivatives of u", self.n)));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, &c)| {
                e.iter().zip(u_derivs).fold(C64::new(c as f64, 0.0), |acc, (&k, u)| acc * u.powu(k))
            })
            .sum())
    }
}

impl fmt::Display for DiffChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}")?;
            }
            for (i, &k) in e.iter().enumerate().filter(|(_, &k)| k > 0) {
                write!(f, "u{}", "'".repeat(i))?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Wronskian of functions given by their Taylor series at a common point.
fn wronskian_of_series(cols: &[Series<f64>]) -> C64 {
    let k = cols.len();
    let m = (0..k).map(|i| cols.iter().map(|s| s.derivative_value(i)).collect()).collect();
    determinant(m)
}

fn wronskian_at(fs: &[Map], eq: &Equation, z0: C64, w0: C64) -> Result<C64> {
    if fs.is_empty() {
        return Ok(C64::new(1.0, 0.0));
    }
    let ws = branch_series(eq, z0, w0, fs.len() - 1)?;
    let cols = fs.iter().map(|f| f.series_along(z0, &ws)).collect::<Result<Vec<_>>>()?;
    Ok(wronskian_of_series(&cols))
}

/// `det(f_j^{(i)})` at `z0` on the given branch, `0 ≤ i, j < k`.
pub fn wronskian_numeric(fs: &[Map], z0: C64, eq: &Equation, branch: usize) -> Result<C64> {
    let roots = eq.finite_roots_at(z0)?;
    let w0 = *roots
        .get(branch)
        .ok_or_else(|| Error::Precondition(format!("branch {branch} does not exist over {z0}")))?;
    wronskian_at(fs, eq, z0, w0)
}

fn finite_dens(fs: &[&Map], z: C64, w: C64) -> bool {
    fs.iter().all(|f| f.den().eval(z, w).norm() > 1e-6)
}

/// `W^{(n)}/W` from the chain against the branch derivatives, `1 ≤ n ≤ n_max`.
pub fn check_lemma_3_2(eq: &Equation, n_max: usize, samples: usize, seed: u64) -> Result<MarginReport> {
    let points = sample_points(eq, samples, seed, |_, w| w.norm() > 1e-3)?;
    let chains: Vec<DiffChain> = (1..=n_max).map(diff_polynomial_chain).collect();
    let mut rows = Vec::new();
    for (z, w) in points {
        let ws = branch_series(eq, z, w, n_max)?;
        let u = ws.differentiate().div(&ws.truncate(n_max.saturating_sub(1)))?;
        let us: Vec<C64> = (0..n_max).map(|i| u.derivative_value(i)).collect();
        for chain in &chains {
            let n = chain.order();
            let exact = ws.derivative_value(n) / w;
            let err = (chain.eval(&us)? - exact).norm() / exact.norm().max(1.0);
            rows.push(MarginRow::new(format!("n={n}"), z.norm(), err, CHAIN_TOL).at(z));
        }
    }
    Ok(MarginReport::zero_slack("lemma3.2", rows, 0.0))
}

/// `W(f_1, …, f_k) = g^k·W(f_1/g, …, f_k/g)` at seeded points.
pub fn check_lemma_3_3(fs: &[Map], g: &Map, eq: &Equation, samples: usize, seed: u64) -> Result<MarginReport> {
    let scaled = fs.iter().map(|f| map_arith(MapOp::Div, f, g)).collect::<Result<Vec<_>>>()?;
    let mut guard: Vec<&Map> = fs.iter().chain(scaled.iter()).collect();
    guard.push(g);
    let points = sample_points(eq, samples, seed, |z, w| finite_dens(&guard, z, w) && g.eval(z, w).norm() > 1e-6)?;
    let k = fs.len() as u32;
    let mut rows = Vec::new();
    for (i, (z, w)) in points.into_iter().enumerate() {
        let lhs = wronskian_at(fs, eq, z, w)?;
        let rhs = g.eval(z, w).powu(k) * wronskian_at(&scaled, eq, z, w)?;
        let err = (lhs - rhs).norm() / lhs.norm().max(1e-30);
        rows.push(MarginRow::new(format!("sample {i}"), z.norm(), err, SCALING_TOL).at(z));
    }
    Ok(MarginReport::zero_slack("lemma3.3", rows, 0.0))
}

fn monomial_exprs(targets: &[Target], d: usize) -> Result<Vec<Map>> {
    enumerate_monomials(targets.len(), d)
        .into_iter()
        .map(|p| {
            let mut acc = Map::constant(C64::new(1.0, 0.0));
            for (t, &e) in targets.iter().zip(&p) {
                for _ in 0..e {
                    acc = map_arith(MapOp::Mul, &acc, &t.expr)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Greedy maximal subset whose values at the points are linearly independent.
fn independent_subset(fs: Vec<Map>, points: &[(C64, C64)]) -> Vec<Map> {
    let mut chosen: Vec<Map> = Vec::new();
    for f in fs {
        let mut cols: Vec<&Map> = chosen.iter().collect();
        cols.push(&f);
        let m = DMatrix::from_fn(points.len(), cols.len(), |i, j| cols[j].eval(points[i].0, points[i].1));
        if numeric_rank(&m) == cols.len() {
            chosen.push(f);
        }
    }
    chosen
}

/// `P(W) = W(B_1, …, B_k, W·b_1, …, W·b_n)` is unchanged under `W ↦ W − a`
/// for a seeded random linear combination `a` of the targets; `b` spans the
/// degree-`s` monomials and `B` the degree-`(s + 1)` monomials.
pub fn check_pw_invariance(eq: &Equation, targets: &[Target], s: usize, samples: usize, seed: u64) -> Result<MarginReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut a = Map::constant(C64::new(0.0, 0.0));
    for t in targets {
        let c = Map::constant(Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        a = map_arith(MapOp::Add, &a, &map_arith(MapOp::Mul, &c, &t.expr)?)?;
    }
    check_pw_shift(eq, targets, s, &a, samples, seed)
}

/// [`check_pw_invariance`] with an explicit shift `a`.
pub fn check_pw_shift(eq: &Equation, targets: &[Target], s: usize, a: &Map, samples: usize, seed: u64) -> Result<MarginReport> {
    if targets.is_empty() {
        return Err(Error::Precondition("at least one target is required".into()));
    }
    let lower = monomial_exprs(targets, s)?;
    let upper = monomial_exprs(targets, s + 1)?;
    let guard: Vec<&Map> = targets.iter().map(|t| &t.expr).chain(std::iter::once(a)).collect();
    let probe = sample_points(eq, upper.len().max(lower.len()) + 6, seed.wrapping_add(1), |z, w| finite_dens(&guard, z, w))?;
    let b = independent_subset(lower, &probe);
    let big_b = independent_subset(upper, &probe);
    let w = Map::w();
    let shifted = map_arith(MapOp::Sub, &w, a)?;
    let mut cols_w = big_b.clone();
    let mut cols_a = big_b;
    for bi in &b {
        cols_w.push(map_arith(MapOp::Mul, &w, bi)?);
        cols_a.push(map_arith(MapOp::Mul, &shifted, bi)?);
    }
    let points = sample_points(eq, samples, seed, |z, w| finite_dens(&guard, z, w))?;
    let mut rows = Vec::new();
    for (i, (z, w)) in points.into_iter().enumerate() {
        let pw = wronskian_at(&cols_w, eq, z, w)?;
        let pa = wronskian_at(&cols_a, eq, z, w)?;
        let err = (pa - pw).norm() / pw.norm().max(1e-30);
        rows.push(MarginRow::new(format!("sample {i}"), z.norm(), err, INVARIANCE_TOL).at(z));
    }
    let mut report = MarginReport::zero_slack("pw", rows, 0.0);
    report.notes.push(format!("{} columns: {} of degree s + 1, {} of degree s", cols_w.len(), cols_w.len() - b.len(), b.len()));
    Ok(report)
}
