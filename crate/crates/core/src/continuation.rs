//! Numerical continuation of the branches along paths, monodromy around
//! critical points and exact branch derivatives.

use num_traits::Zero;

use crate::equation::AlgebroidEquation;
use crate::error::{Error, Result};
use crate::polyalg::Series;
use crate::scalar::{creal, Cx, Scalar};

const MIN_STEP: f64 = 1e-7;
/// Required ratio between the second-nearest and nearest candidate.
const MATCH_MARGIN: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathKind<T: Scalar> {
    /// Positively oriented circle traversed `turns` times, starting at
    /// `center + radius`.
    Circle { center: Cx<T>, radius: T, turns: u32 },
    Segment { from: Cx<T>, to: Cx<T> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathSpec<T: Scalar> {
    pub kind: PathKind<T>,
    /// Initial number of steps; steps are halved adaptively from there.
    pub steps: usize,
}

impl<T: Scalar> PathSpec<T> {
    pub fn circle(center: Cx<T>, radius: T) -> Self {
        Self { kind: PathKind::Circle { center, radius, turns: 1 }, steps: 128 }
    }

    pub fn segment(from: Cx<T>, to: Cx<T>) -> Self {
        Self { kind: PathKind::Segment { from, to }, steps: 64 }
    }

    /// Point at parameter `s ∈ [0, 1]`.
    pub fn point(&self, s: T) -> Cx<T> {
        match self.kind {
            PathKind::Circle { center, radius, turns } => {
                center + Cx::from_polar(radius, T::TAU() * T::lit(turns as f64) * s)
            }
            PathKind::Segment { from, to } => from + (to - from) * s,
        }
    }

    pub fn start(&self) -> Cx<T> {
        self.point(T::zero())
    }

    pub fn end(&self) -> Cx<T> {
        self.point(T::one())
    }

    /// Smallest distance from the path to `z`.
    pub fn distance_to(&self, z: Cx<T>) -> T {
        match self.kind {
            PathKind::Circle { center, radius, .. } => ((z - center).norm() - radius).abs(),
            PathKind::Segment { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == T::zero() {
                    return (z - from).norm();
                }
                let s = ((z - from) * d.conj()).re / len2;
                let s = s.max(T::zero()).min(T::one());
                (z - (from + d * s)).norm()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackStep<T: Scalar> {
    pub s: T,
    pub z: Cx<T>,
    /// Largest distance between predicted and matched values.
    pub step_error: T,
    /// Smallest ratio second-nearest / nearest over the branches.
    pub margin: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackResult<T: Scalar> {
    pub values: Vec<Cx<T>>,
    pub log: Vec<TrackStep<T>>,
    pub halvings: usize,
}

/// Permutation of the branch ordering after one turn around a loop.
///
/// `perm[i] = j` means the branch starting at value `i` of the base ordering
/// ends at value `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyPermutation<T: Scalar> {
    pub perm: Vec<usize>,
    pub base_point: Cx<T>,
    pub cycles: Vec<Vec<usize>>,
}

impl<T: Scalar> MonodromyPermutation<T> {
    pub fn new(perm: Vec<usize>, base_point: Cx<T>) -> Self {
        let cycles = cycles_of(&perm);
        Self { perm, base_point, cycles }
    }

    /// Sheet numbers `λ_i`, sorted descending.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut l: Vec<usize> = self.cycles.iter().map(|c| c.len()).collect();
        l.sort_unstable_by(|a, b| b.cmp(a));
        l
    }

    /// `Σ (λ_i − 1)`.
    pub fn ramification(&self) -> usize {
        self.cycles.iter().map(|c| c.len() - 1).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Cycle decomposition; fixed points appear as 1-cycles.
pub fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            cycle.push(j);
            j = perm[j];
        }
        out.push(cycle);
    }
    out
}

/// Composition `(a then b)`: `i ↦ b[a[i]]`.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&i| b[i]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Fails when the path passes within `δ_path` of a critical point.
fn check_clearance<T: Scalar>(eq: &AlgebroidEquation<T>, path: &PathSpec<T>) -> Result<()> {
    let crit = eq.critical_points()?;
    let delta = T::lit(eq.tolerances().path);
    for c in crit.locations() {
        if path.distance_to(c) < delta {
            return Err(Error::PathTooClose(format!("critical point {c} within {delta} of the path")));
        }
    }
    Ok(())
}

fn tangent<T: Scalar>(eq: &AlgebroidEquation<T>, z: Cx<T>, w: Cx<T>) -> Cx<T> {
    let psi = eq.to_bivariate();
    let pw = psi.partial_w().eval(z, w);
    if pw.is_zero() {
        return Cx::zero();
    }
    -psi.partial_z().eval(z, w) / pw
}

/// Match each predicted value to a distinct root with the required margin.
fn match_values<T: Scalar>(predicted: &[Cx<T>], roots: &[Cx<T>]) -> Option<(Vec<usize>, T, T)> {
    let mut used = vec![false; roots.len()];
    let mut idx = Vec::with_capacity(predicted.len());
    let mut worst_err = T::zero();
    let mut worst_margin = T::infinity();
    for &p in predicted {
        let mut d: Vec<(T, usize)> = roots.iter().enumerate().map(|(k, &r)| ((r - p).norm(), k)).collect();
        d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let (d1, k) = d[0];
        if used[k] {
            return None;
        }
        if d.len() > 1 {
            let d2 = d[1].0;
            let ratio = if d1 == T::zero() { T::infinity() } else { d2 / d1 };
            if ratio < T::lit(MATCH_MARGIN) {
                return None;
            }
            worst_margin = worst_margin.min(ratio);
        }
        used[k] = true;
        idx.push(k);
        worst_err = worst_err.max(d1);
    }
    Some((idx, worst_err, worst_margin))
}

/// Continue the ordered branch tuple `start` along `path`.
///
/// Euler prediction along `w' = −Ψ_z/Ψ_W`, correction by the recomputed
/// root set, nearest-neighbour matching with a separation margin; the step
/// is halved whenever matching is ambiguous.
pub fn track<T: Scalar>(eq: &AlgebroidEquation<T>, path: &PathSpec<T>, start: &[Cx<T>]) -> Result<TrackResult<T>> {
    if start.len() != eq.v() {
        return Err(Error::Precondition(format!("expected {} start values, got {}", eq.v(), start.len())));
    }
    check_clearance(eq, path)?;
    let initial = eq.finite_roots_at(path.start())?;
    let tol = T::lit(eq.tolerances().track).max(T::lit(eq.tolerances().merge));
    if match_values(start, &initial).is_none_or(|(_, err, _)| err > tol * T::lit(1e3)) {
        return Err(Error::Precondition("start values are not the roots at the path start".into()));
    }
    let max_step = T::one() / T::lit(path.steps.max(1) as f64);
    let min_step = T::lit(MIN_STEP);
    let mut ds = max_step;
    let mut s = T::zero();
    let mut current = start.to_vec();
    let mut log = Vec::new();
    let mut halvings = 0;
    while s < T::one() {
        let s1 = (s + ds).min(T::one());
        let (z0, z1) = (path.point(s), path.point(s1));
        let predicted: Vec<_> = current.iter().map(|&w| w + tangent(eq, z0, w) * (z1 - z0)).collect();
        let accepted = eq
            .finite_roots_at(z1)
            .ok()
            .and_then(|roots| match_values(&predicted, &roots).map(|m| (roots, m)));
        match accepted {
            Some((roots, (idx, err, margin))) => {
                current = idx.iter().map(|&k| roots[k]).collect();
                log.push(TrackStep { s: s1, z: z1, step_error: err, margin });
                s = s1;
                ds = (ds * T::lit(1.5)).min(max_step);
            }
            None => {
                ds = ds / T::lit(2.0);
                halvings += 1;
                if ds < min_step {
                    return Err(Error::PathTooClose(format!("step underflow near z = {z0}")));
                }
            }
        }
    }
    Ok(TrackResult { values: current, log, halvings })
}

/// Branch permutation after one positive turn of the circle `|z − center| = radius`.
pub fn loop_permutation<T: Scalar>(
    eq: &AlgebroidEquation<T>,
    center: Cx<T>,
    radius: T,
) -> Result<MonodromyPermutation<T>> {
    let path = PathSpec::circle(center, radius);
    let base = path.start();
    let start = eq.finite_roots_at(base)?;
    let end = track(eq, &path, &start)?.values;
    Ok(MonodromyPermutation::new(permutation_between(&start, &end)?, base))
}

/// Index map `i ↦ j` with `end[i] ≈ start[j]`.
pub(crate) fn permutation_between<T: Scalar>(start: &[Cx<T>], end: &[Cx<T>]) -> Result<Vec<usize>> {
    match_values(end, start)
        .map(|(idx, _, _)| idx)
        .ok_or_else(|| Error::Numerical("could not identify end values with start values".into()))
}

/// Monodromy around the critical point `z0` on a circle of the given radius
/// containing no other critical point.
pub fn monodromy<T: Scalar>(eq: &AlgebroidEquation<T>, z0: Cx<T>, radius: T) -> Result<MonodromyPermutation<T>> {
    let crit = eq.critical_points()?;
    let merge = T::lit(eq.tolerances().merge) * (T::one() + z0.norm());
    if !crit.contains(z0, merge.max(T::lit(eq.tolerances().path))) {
        return Err(Error::Precondition(format!("{z0} is not a critical point")));
    }
    for c in crit.locations() {
        let d = (c - z0).norm();
        if d > merge && d <= radius + T::lit(eq.tolerances().path) {
            return Err(Error::Precondition(format!("circle of radius {radius} around {z0} reaches critical point {c}")));
        }
    }
    loop_permutation(eq, z0, radius)
}

/// Default monodromy radius: well inside the distance to the other critical points.
pub fn isolating_radius<T: Scalar>(crit: impl Iterator<Item = Cx<T>>, z0: Cx<T>) -> T {
    let nearest = crit
        .map(|c| (c - z0).norm())
        .filter(|&d| d > T::lit(1e-9) * (T::one() + z0.norm()))
        .fold(T::infinity(), T::min);
    let cap = T::lit(0.5) * (T::one() + z0.norm());
    if nearest.is_finite() {
        (T::lit(0.4) * nearest).min(cap)
    } else {
        cap
    }
}

/// Taylor series of the branch through `(z0, w0)` to the given order,
/// solved order by order from `Ψ(z0 + h, w(h)) = 0`.
pub fn branch_series<T: Scalar>(eq: &AlgebroidEquation<T>, z0: Cx<T>, w0: Cx<T>, order: usize) -> Result<Series<T>> {
    let psi = eq.to_bivariate();
    let pw = psi.partial_w().eval(z0, w0);
    let pw_scale = psi.partial_w().abs().eval(creal(z0.norm()), creal(w0.norm())).re;
    if pw.norm() <= T::lit(eq.tolerances().deriv) * pw_scale.max(T::min_positive_value()) {
        return Err(Error::Ramification(format!("({z0}, {w0})")));
    }
    let mut s = Series::constant(w0, order);
    for k in 1..=order {
        let e = Series::of_bivariate(&psi, z0, &s.truncate(k));
        s.set(k, -e.coeff(k) / pw);
    }
    // residual check against the magnitude of the individual terms
    let resid = Series::of_bivariate(&psi, z0, &s);
    let mag = Series::of_bivariate(
        &psi.abs(),
        creal(z0.norm()),
        &Series::new(s.coeffs().iter().map(|c| creal(c.norm())).collect()),
    );
    for k in 0..=order {
        let bound = T::lit(eq.tolerances().deriv) * mag.coeff(k).re.max(T::one());
        if resid.coeff(k).norm() > bound {
            return Err(Error::Numerical(format!("branch series residual {} at order {k}", resid.coeff(k).norm())));
        }
    }
    Ok(s)
}

/// For every branch over the regular point `z0`: `(w, w', …, w^{(n)})`.
pub fn branch_derivatives<T: Scalar>(eq: &AlgebroidEquation<T>, z0: Cx<T>, n: usize) -> Result<Vec<Vec<Cx<T>>>> {
    eq.finite_roots_at(z0)?
        .into_iter()
        .map(|w0| {
            let s = branch_series(eq, z0, w0, n)?;
            Ok((0..=n).map(|k| s.derivative_value(k)).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(c: &[&[f64]]) -> AlgebroidEquation<f64> {
        AlgebroidEquation::from_real(c).unwrap()
    }

    fn sqrt_z() -> AlgebroidEquation<f64> {
        eq(&[&[0.0, -1.0], &[], &[1.0]])
    }

    fn close(a: Cx<f64>, b: Cx<f64>, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn track_segment() {
        let path = PathSpec::segment(creal(1.0), creal(4.0));
        let r = track(&sqrt_z(), &path, &[creal(1.0), creal(-1.0)]).unwrap();
        assert!(close(r.values[0], creal(2.0), 1e-10) && close(r.values[1], creal(-2.0), 1e-10));
    }

    #[test]
    fn track_single_valued() {
        let e = eq(&[&[0.0, -1.0], &[1.0]]);
        let path = PathSpec::segment(Cx::new(1.0, 1.0), Cx::new(-3.0, 0.5));
        let r = track(&e, &path, &[Cx::new(1.0, 1.0)]).unwrap();
        assert!(close(r.values[0], Cx::new(-3.0, 0.5), 1e-10));
    }

    #[test]
    fn track_circle_swaps() {
        let r = track(&sqrt_z(), &PathSpec::circle(creal(0.0), 1.0), &[creal(1.0), creal(-1.0)]).unwrap();
        assert!(close(r.values[0], creal(-1.0), 1e-9) && close(r.values[1], creal(1.0), 1e-9));
    }

    #[test]
    fn path_too_close() {
        let path = PathSpec::segment(creal(-1.0), creal(1.0));
        let err = track(&sqrt_z(), &path, &[Cx::new(0.0, 1.0), Cx::new(0.0, -1.0)]).unwrap_err();
        assert!(matches!(err, Error::PathTooClose(_)));
    }

    #[test]
    fn monodromy_examples() {
        let m = monodromy(&sqrt_z(), creal(0.0), 1.0).unwrap();
        assert_eq!(m.cycle_lengths(), vec![2]);
        let two = eq(&[&[-2.0, 3.0, -1.0], &[], &[1.0]]);
        assert!(matches!(monodromy(&two, creal(5.0), 0.3), Err(Error::Precondition(_))));
        assert_eq!(monodromy(&two, creal(1.0), 0.3).unwrap().cycle_lengths(), vec![2]);
        assert!(matches!(monodromy(&two, creal(1.0), 1.5), Err(Error::Precondition(_))));
        let cube = eq(&[&[0.0, -1.0], &[], &[], &[1.0]]);
        assert_eq!(monodromy(&cube, creal(0.0), 1.0).unwrap().cycle_lengths(), vec![3]);
    }

    #[test]
    fn regular_loop_is_identity() {
        let m = loop_permutation(&sqrt_z(), creal(3.0), 1.0).unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn derivative_examples() {
        let d = branch_derivatives(&sqrt_z(), creal(4.0), 2).unwrap();
        let b = d.iter().find(|b| close(b[0], creal(2.0), 1e-12)).unwrap();
        assert!(close(b[1], creal(0.25), 1e-13));
        assert!(close(b[2], creal(-1.0 / 32.0), 1e-13));
        let d = branch_derivatives(&eq(&[&[0.0, 0.0, -1.0], &[1.0]]), creal(1.5), 3).unwrap();
        let expect = [2.25, 3.0, 2.0, 0.0];
        for (k, e) in expect.iter().enumerate() {
            assert!(close(d[0][k], creal(*e), 1e-12));
        }
        assert!(matches!(branch_derivatives(&sqrt_z(), creal(0.0), 1), Err(Error::Ramification(_))));
    }

    #[test]
    fn cycles() {
        assert_eq!(cycles_of(&[1, 2, 0, 3]), vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(compose(&[1, 2, 0], &invert(&[1, 2, 0])), vec![0, 1, 2]);
    }
}
