//! Proximity, counting, ramification and characteristic functions on circles
//! `|z| = r`, normalized by `1/v`.

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::continuation::{isolating_radius, monodromy};
use crate::equation::{AlgebroidEquation, CriticalSet};
use crate::error::{Error, Result};
use crate::local::{pole_divisor, DivisorList};
use crate::scalar::{Cx, Scalar};

const MIN_POINTS: usize = 64;
const MAX_POINTS: usize = 65536;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct CharacteristicSample<T: Scalar> {
    pub r: T,
    pub m: T,
    pub N: T,
    pub T: T,
    pub Nx: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Geometric,
    Linear,
}

/// Increasing radii at which the functionals are sampled.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusGrid<T: Scalar> {
    pub radii: Vec<T>,
    /// Initial trapezoid point count; doubled until convergence.
    pub quadrature_points: usize,
}

impl<T: Scalar> RadiusGrid<T> {
    pub fn new(radii: Vec<T>) -> Result<Self> {
        if radii.iter().any(|&r| r.is_nan() || r <= T::zero() || r.is_infinite()) {
            return Err(Error::Precondition("radii must be positive and finite".into()));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("radii must be strictly increasing".into()));
        }
        Ok(Self { radii, quadrature_points: MIN_POINTS })
    }

    pub fn spaced(r_min: T, r_max: T, points: usize, spacing: Spacing) -> Result<Self> {
        if points == 0 || r_min.is_nan() || r_min <= T::zero() || r_max < r_min {
            return Err(Error::Precondition(format!("bad grid [{r_min}, {r_max}] with {points} points")));
        }
        if points == 1 {
            return Self::new(vec![r_min]);
        }
        let last = T::lit((points - 1) as f64);
        let radii = (0..points)
            .map(|i| {
                let s = T::lit(i as f64) / last;
                match spacing {
                    Spacing::Geometric => r_min * (r_max / r_min).powf(s),
                    Spacing::Linear => r_min + (r_max - r_min) * s,
                }
            })
            .collect();
        Self::new(radii)
    }

    pub fn geometric(r_min: T, r_max: T, points: usize) -> Result<Self> {
        Self::spaced(r_min, r_max, points, Spacing::Geometric)
    }

    /// Move radii that come within `δ_r` of a critical modulus outward until clear.
    pub fn snapped(&self, crit: &CriticalSet<T>, rel: T) -> Self {
        let moduli: Vec<T> = crit.locations().map(|c| c.norm()).collect();
        self.snapped_moduli(&moduli, rel)
    }

    pub fn snapped_moduli(&self, moduli: &[T], rel: T) -> Self {
        let mut radii: Vec<T> = Vec::with_capacity(self.radii.len());
        for &r0 in &self.radii {
            let mut r = r0;
            while let Some(&m) = moduli.iter().find(|&&m| (m - r).abs() < rel * r) {
                r = m + T::lit(2.0) * rel * r;
            }
            if r != r0 {
                warn!("radius {r0} is too close to a critical modulus; using {r}");
            }
            if let Some(&prev) = radii.last() {
                if r <= prev {
                    continue;
                }
            }
            radii.push(r);
        }
        Self { radii, quadrature_points: self.quadrature_points }
    }
}

fn log_plus<T: Scalar>(x: T) -> T {
    if x > T::one() {
        x.ln()
    } else {
        T::zero()
    }
}

/// Critical points of the distinct branches, for equations with or without
/// repeated factors.
pub fn critical_set<T: Scalar>(eq: &AlgebroidEquation<T>) -> Result<CriticalSet<T>> {
    if eq.is_squarefree()? {
        eq.critical_points()
    } else {
        eq.squarefree_part()?.critical_points()
    }
}

fn check_radius<T: Scalar>(eq: &AlgebroidEquation<T>, crit: &CriticalSet<T>, r: T) -> Result<()> {
    if r.is_nan() || r <= T::zero() {
        return Err(Error::NonPositiveRadius(r.to_f64_lossy()));
    }
    let delta = T::lit(eq.tolerances().radius) * r;
    if crit.locations().any(|c| (c.norm() - r).abs() < delta) {
        return Err(Error::PerturbRadius(r.to_f64_lossy()));
    }
    Ok(())
}

/// Sum of `log⁺|w|` over the root multiset at `z`.
fn integrand<T: Scalar>(eq: &AlgebroidEquation<T>, z: Cx<T>) -> Result<T> {
    let roots = eq.finite_roots_at(z)?;
    if roots.len() != eq.v() {
        return Err(Error::PerturbRadius(z.norm().to_f64_lossy()));
    }
    Ok(roots.iter().map(|w| log_plus(w.norm())).sum())
}

fn proximity_raw<T: Scalar>(eq: &AlgebroidEquation<T>, r: T, start_points: usize) -> Result<T> {
    let v = T::lit(eq.v() as f64);
    let at = |k: usize, n: usize| -> Result<T> {
        integrand(eq, Cx::from_polar(r, T::TAU() * T::lit(k as f64) / T::lit(n as f64)))
    };
    let mut n = start_points.clamp(1, MAX_POINTS);
    let values: Vec<T> = (0..n).into_par_iter().map(|k| at(k, n)).collect::<Result<_>>()?;
    let mut sum: T = values.into_iter().sum();
    let mut estimate = sum / T::lit(n as f64) / v;
    let tol = T::lit(eq.tolerances().quad);
    while n < MAX_POINTS {
        let odd: Vec<T> = (0..n).into_par_iter().map(|k| at(2 * k + 1, 2 * n)).collect::<Result<_>>()?;
        sum = sum + odd.into_iter().sum();
        n *= 2;
        let next = sum / T::lit(n as f64) / v;
        let diff = (next - estimate).abs();
        estimate = next;
        if diff < tol {
            return Ok(estimate);
        }
    }
    warn!("proximity at r = {r} did not reach the quadrature tolerance");
    Ok(estimate)
}

/// `m(r) = (1/v)(1/2π)∮ Σ log⁺|w| dθ`.
pub fn proximity<T: Scalar>(eq: &AlgebroidEquation<T>, r: T) -> Result<T> {
    check_radius(eq, &critical_set(eq)?, r)?;
    proximity_raw(eq, r, MIN_POINTS)
}

/// `(1/v)[Σ_{0<|z_k|≤r} m_k log(r/|z_k|) + m_0 log r]`.
pub fn counting<T: Scalar>(divisor: &DivisorList<T>, r: T, v: usize) -> Result<T> {
    if r.is_nan() || r <= T::zero() {
        return Err(Error::NonPositiveRadius(r.to_f64_lossy()));
    }
    let inner: T = divisor
        .entries
        .iter()
        .filter(|(z, _)| z.norm() <= r)
        .map(|(z, m)| T::lit(*m as f64) * (r / z.norm()).ln())
        .sum();
    Ok((inner + T::lit(divisor.origin_multiplicity as f64) * r.ln()) / T::lit(v as f64))
}

/// `{(z0, Σ(λ_i − 1))}` over the finite critical points, by monodromy.
pub fn ramification_divisor<T: Scalar>(eq: &AlgebroidEquation<T>) -> Result<DivisorList<T>> {
    let base = if eq.is_squarefree()? { eq.clone() } else { eq.squarefree_part()? };
    let crit = base.critical_points()?;
    let locations: Vec<Cx<T>> = crit.locations().collect();
    let merge = T::lit(eq.tolerances().merge);
    let per_point: Vec<(Cx<T>, usize)> = locations
        .par_iter()
        .map(|&z0| {
            let radius = isolating_radius(locations.iter().copied(), z0);
            Ok((z0, monodromy(&base, z0, radius)?.ramification()))
        })
        .collect::<Result<_>>()?;
    let mut d = DivisorList::new();
    for (z0, k) in per_point {
        d.add(z0, k, merge);
    }
    Ok(d)
}

/// `N_x(r)`: counting function of the ramification divisor.
pub fn ramification<T: Scalar>(eq: &AlgebroidEquation<T>, r: T) -> Result<T> {
    check_radius(eq, &critical_set(eq)?, r)?;
    counting(&ramification_divisor(eq)?, r, eq.v())
}

/// Precomputed divisors of one equation, for repeated evaluation over radii.
#[derive(Clone, Debug)]
pub struct Profile<T: Scalar> {
    eq: AlgebroidEquation<T>,
    crit: CriticalSet<T>,
    poles: DivisorList<T>,
    ramification: Option<DivisorList<T>>,
}

impl<T: Scalar> Profile<T> {
    /// Profile without the ramification divisor (`N_x` reported as 0).
    pub fn new(eq: &AlgebroidEquation<T>) -> Result<Self> {
        Ok(Self { crit: critical_set(eq)?, poles: pole_divisor(eq)?, ramification: None, eq: eq.clone() })
    }

    pub fn with_ramification(eq: &AlgebroidEquation<T>) -> Result<Self> {
        let mut p = Self::new(eq)?;
        p.ramification = Some(ramification_divisor(eq)?);
        Ok(p)
    }

    pub fn equation(&self) -> &AlgebroidEquation<T> {
        &self.eq
    }

    pub fn critical(&self) -> &CriticalSet<T> {
        &self.crit
    }

    pub fn poles(&self) -> &DivisorList<T> {
        &self.poles
    }

    pub fn ramification(&self) -> Option<&DivisorList<T>> {
        self.ramification.as_ref()
    }

    pub fn sample(&self, r: T, quadrature_points: usize) -> Result<CharacteristicSample<T>> {
        check_radius(&self.eq, &self.crit, r)?;
        let v = self.eq.v();
        let m = proximity_raw(&self.eq, r, quadrature_points)?;
        let n = counting(&self.poles, r, v)?;
        let nx = match &self.ramification {
            Some(d) => counting(d, r, v)?,
            None => T::zero(),
        };
        Ok(CharacteristicSample { r, m, N: n, T: m + n, Nx: nx })
    }

    /// `T(r)`, snapping `r` outward when it meets a critical modulus.
    pub fn characteristic(&self, r: T) -> Result<T> {
        let r = snap_one(r, &self.crit, T::lit(self.eq.tolerances().radius));
        Ok(self.sample(r, MIN_POINTS)?.T)
    }
}

fn snap_one<T: Scalar>(r: T, crit: &CriticalSet<T>, rel: T) -> T {
    RadiusGrid { radii: vec![r], quadrature_points: MIN_POINTS }.snapped(crit, rel).radii[0]
}

/// `T(r)` for a single radius.
pub fn characteristic<T: Scalar>(eq: &AlgebroidEquation<T>, r: T) -> Result<T> {
    Profile::new(eq)?.characteristic(r)
}

/// `(r, m, N, T, N_x)` over the grid; radii are snapped away from critical
/// moduli and `T` is checked to be nondecreasing.
pub fn characteristic_curve<T: Scalar>(
    eq: &AlgebroidEquation<T>,
    grid: &RadiusGrid<T>,
) -> Result<Vec<CharacteristicSample<T>>> {
    let profile = Profile::with_ramification(eq)?;
    let grid = grid.snapped(&profile.crit, T::lit(eq.tolerances().radius));
    let samples: Vec<CharacteristicSample<T>> = grid
        .radii
        .par_iter()
        .map(|&r| profile.sample(r, grid.quadrature_points))
        .collect::<Result<_>>()?;
    let slack = T::lit(10.0 * eq.tolerances().quad);
    for w in samples.windows(2) {
        if w[1].T < w[0].T - slack {
            return Err(Error::Numerical(format!(
                "characteristic decreased from {} at r = {} to {} at r = {}",
                w[0].T, w[0].r, w[1].T, w[1].r
            )));
        }
    }
    Ok(samples)
}
