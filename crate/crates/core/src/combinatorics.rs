//! Monomial counts in `q` small functions, the stable degree search and a
//! numerical rank estimate of the monomial span.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equation::AlgebroidEquation;
use crate::error::{Error, Result};
use crate::mapping::SmallFunctionTarget;
use crate::scalar::{from_c64, to_c64, Cx, Scalar};

pub const DEFAULT_SEED: u64 = 42;
const RANK_TOL: f64 = 1e-8;
const MAX_RETRIES: usize = 64;

fn binomial(n: u64, k: u64) -> Result<u64> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Overflow(format!("C({n}, {k})")));
        }
    }
    Ok(acc as u64)
}

/// Number of monomials of total degree exactly `d` in `q` variables,
/// `C(q + d − 1, d)`. With `d = s + 1` this is `C(q + s, s + 1)`.
pub fn monomial_count(q: usize, d: usize) -> Result<u64> {
    if q == 0 {
        return Err(Error::Precondition("q must be at least 1".into()));
    }
    binomial((q + d - 1) as u64, d as u64)
}

/// Exponent tuples with `Σ p_j = d`, in descending lexicographic order.
pub fn enumerate_monomials(q: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(q: usize, d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if q == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for p in (0..=d).rev() {
            prefix.push(p);
            rec(q - 1, d - p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if q > 0 {
        rec(q, d, &mut Vec::with_capacity(q), &mut out);
    }
    out
}

/// `C(q + s, s + 1) ≤ q(q + 1) s^q`.
pub fn bound_check(q: usize, s: usize) -> Result<bool> {
    let lhs = u128::from(monomial_count(q, s + 1)?);
    let rhs = (q as u128) * (q as u128 + 1) * (s as u128).checked_pow(q as u32).unwrap_or(u128::MAX);
    Ok(lhs <= rhs)
}

/// Smallest `s ≥ 1` with `(q + s)/(s + 1) < 1 + ε`, i.e. `ε s > q − 1 − ε`.
pub fn find_stable_s(q: usize, epsilon: f64) -> Result<usize> {
    if q == 0 || epsilon.is_nan() || epsilon <= 0.0 || epsilon.is_infinite() {
        return Err(Error::Precondition(format!("need q ≥ 1 and ε > 0, got q = {q}, ε = {epsilon}")));
    }
    let ok = |s: usize| ((q + s) as f64) < (1.0 + epsilon) * ((s + 1) as f64);
    let guess = ((q as f64 - 1.0 - epsilon) / epsilon).floor();
    if guess > 1e15 {
        return Err(Error::Overflow(format!("stable s for ε = {epsilon}")));
    }
    let mut s = (guess.max(0.0) as usize + 1).max(1);
    while s > 1 && ok(s - 1) {
        s -= 1;
    }
    while !ok(s) {
        s += 1;
    }
    Ok(s)
}

/// Numerical rank of the matrix of all degree-`s` monomials in the targets,
/// evaluated at seeded regular points on the first branch.
pub fn numeric_dim<T: Scalar>(
    targets: &[SmallFunctionTarget<T>],
    eq: &AlgebroidEquation<T>,
    s: usize,
    sample_count: usize,
    seed: u64,
) -> Result<usize> {
    let monomials = enumerate_monomials(targets.len(), s);
    if sample_count < monomials.len() {
        return Err(Error::Precondition(format!(
            "need at least {} samples, got {sample_count}",
            monomials.len()
        )));
    }
    let points = sample_points(eq, sample_count, seed, |z, w| {
        targets.iter().all(|t| t.expr.den().eval(z, w).norm() > T::lit(1e-6))
    })?;
    let mut m = DMatrix::<Complex<f64>>::zeros(points.len(), monomials.len());
    for (i, &(z, w)) in points.iter().enumerate() {
        let vals: Vec<Cx<T>> = targets.iter().map(|t| t.expr.eval(z, w)).collect();
        for (j, p) in monomials.iter().enumerate() {
            let mut acc = Cx::<T>::new(T::one(), T::zero());
            for (v, &e) in vals.iter().zip(p) {
                acc = acc * v.powu(e as u32);
            }
            m[(i, j)] = to_c64(acc);
        }
    }
    Ok(numeric_rank(&m))
}

pub(crate) fn numeric_rank(m: &DMatrix<Complex<f64>>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&x| x > RANK_TOL * top).count()
}

/// Seeded regular points `(z, w)` with `w` the first branch over `z`,
/// accepted when `accept` holds; points near critical points are resampled.
pub fn sample_points<T: Scalar>(
    eq: &AlgebroidEquation<T>,
    count: usize,
    seed: u64,
    accept: impl Fn(Cx<T>, Cx<T>) -> bool,
) -> Result<Vec<(Cx<T>, Cx<T>)>> {
    let crit = crate::nevanlinna::critical_set(eq)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count {
        let z = from_c64::<T>(Complex::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
        let usable = (crit.distance(z) > T::lit(0.05))
            .then(|| eq.finite_roots_at(z).ok())
            .flatten()
            .and_then(|r| r.first().copied())
            .filter(|&w| accept(z, w));
        match usable {
            Some(w) => out.push((z, w)),
            None => {
                misses += 1;
                if misses > MAX_RETRIES * (count + 1) {
                    return Err(Error::Sampling(format!("only {} of {count} regular sample points found", out.len())));
                }
            }
        }
    }
    Ok(out)
}
