//! All-roots solver: Aberth–Ehrlich simultaneous iteration with a
//! companion-matrix eigenvalue fallback.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use super::gcd::approx_gcd;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{from_c64, to_c64, Cx, Scalar};
use crate::tolerance::Tolerances;

const MAX_ITERATIONS: usize = 600;

/// All roots of `p` with multiplicity, sorted by real then imaginary part.
pub fn poly_roots<T: Scalar>(p: &Polynomial<T>) -> Result<Vec<Cx<T>>> {
    poly_roots_with(p, &Tolerances::for_scalar::<T>())
}

pub fn poly_roots_with<T: Scalar>(p: &Polynomial<T>, tol: &Tolerances) -> Result<Vec<Cx<T>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let cut = T::lit(tol.coeff) * p.max_abs();
    let coeffs = p.coeffs();
    let zeros_at_origin = coeffs.iter().take_while(|c| c.norm() <= cut).count();
    let rest = Polynomial::new(coeffs[zeros_at_origin..].to_vec());
    let mut roots = vec![Cx::zero(); zeros_at_origin];
    roots.extend(nonzero_roots(&rest, tol)?);
    sort_points(&mut roots);
    Ok(roots)
}

/// Residual scale used by the root contract:
/// `τ_root · max|c| · (1 + |r|)^deg`.
pub fn root_residual_bound<T: Scalar>(p: &Polynomial<T>, r: Cx<T>, tol: &Tolerances) -> T {
    T::lit(tol.root) * p.max_abs() * (T::one() + r.norm()).powi(p.degree() as i32)
}

/// Distinct roots with their multiplicities.
///
/// Roots of the squarefree part `p / gcd(p, p')` are simple and therefore
/// accurate; multiplicities are then read off by synthetic division.
pub fn distinct_roots<T: Scalar>(p: &Polynomial<T>, tol: &Tolerances) -> Result<Vec<(Cx<T>, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let g = approx_gcd(p, &p.derivative(), T::lit(tol.gcd));
    let sq = if g.degree() == 0 {
        p.clone()
    } else {
        p.div_rem(&g)?.0
    };
    let simple = poly_roots_with(&sq, tol)?;
    let mut out: Vec<(Cx<T>, usize)> = Vec::new();
    let mut total = 0;
    for r in simple {
        if out.iter().any(|(q, _)| (*q - r).norm() <= T::lit(tol.merge) * (T::one() + r.norm())) {
            continue;
        }
        let m = p.valuation_with(r, T::lit(tol.val).sqrt())?.max(1);
        total += m;
        out.push((r, m));
    }
    if total != p.degree() {
        // Fall back to clustering the raw roots of p.
        let raw = poly_roots_with(p, tol)?;
        out = cluster(&raw, T::lit(tol.val).sqrt());
    }
    Ok(out)
}

fn cluster<T: Scalar>(roots: &[Cx<T>], radius: T) -> Vec<(Cx<T>, usize)> {
    let mut groups: Vec<(Cx<T>, usize)> = Vec::new();
    for &r in roots {
        if let Some(g) = groups.iter_mut().find(|(c, _)| (*c - r).norm() <= radius * (T::one() + r.norm())) {
            let n = T::lit(g.1 as f64);
            g.0 = (g.0 * n + r) / (n + T::one());
            g.1 += 1;
        } else {
            groups.push((r, 1));
        }
    }
    groups
}

pub(crate) fn sort_points<T: Scalar>(v: &mut [Cx<T>]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

fn nonzero_roots<T: Scalar>(p: &Polynomial<T>, tol: &Tolerances) -> Result<Vec<Cx<T>>> {
    let n = p.degree();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p.coeff(0) / p.coeff(1)]),
        _ => {}
    }
    let monic = p.monic();
    if let Some(roots) = aberth(&monic) {
        let roots: Vec<_> = roots.into_iter().map(|r| polish(&monic, r)).collect();
        if roots.iter().all(|&r| monic.eval(r).norm() <= root_residual_bound(&monic, r, tol)) {
            return Ok(roots);
        }
    }
    companion_roots(&monic)
}

fn initial_guesses<T: Scalar>(p: &Polynomial<T>) -> Vec<Cx<T>> {
    let n = p.degree();
    // geometric mean of root moduli from the constant term of the monic form
    let radius = p.coeff(0).norm().powf(T::one() / T::lit(n as f64));
    let radius = if radius > T::zero() && radius.is_finite() { radius } else { T::one() };
    let centroid = -p.coeff(n - 1) / T::lit(n as f64);
    (0..n)
        .map(|k| {
            let theta = T::TAU() * T::lit(k as f64) / T::lit(n as f64) + T::lit(0.4);
            centroid + Cx::from_polar(radius, theta)
        })
        .collect()
}

fn aberth<T: Scalar>(p: &Polynomial<T>) -> Option<Vec<Cx<T>>> {
    let dp = p.derivative();
    let mut z = initial_guesses(p);
    let eps = T::epsilon() * T::lit(8.0);
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = T::zero();
        for i in 0..z.len() {
            let pv = p.eval(z[i]);
            if pv.is_zero() {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let repulsion: Cx<T> = (0..z.len())
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.is_zero() {
                        Cx::zero()
                    } else {
                        Cx::<T>::one() / d
                    }
                })
                .fold(Cx::<T>::zero(), |a, b| a + b);
            let step: Cx<T> = ratio / (Cx::<T>::one() - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return None;
            }
            z[i] = z[i] - step;
            max_step = max_step.max(step.norm() / (T::one() + z[i].norm()));
        }
        if max_step <= eps {
            return Some(z);
        }
    }
    // Multiple roots converge only linearly; accept if residuals are tiny.
    Some(z)
}

/// A few Newton steps; keeps the input if Newton does not improve the residual.
fn polish<T: Scalar>(p: &Polynomial<T>, mut r: Cx<T>) -> Cx<T> {
    let dp = p.derivative();
    for _ in 0..3 {
        let d = dp.eval(r);
        if d.is_zero() {
            break;
        }
        let next = r - p.eval(r) / d;
        if p.eval(next).norm() < p.eval(r).norm() {
            r = next;
        } else {
            break;
        }
    }
    r
}

fn companion_roots<T: Scalar>(p: &Polynomial<T>) -> Result<Vec<Cx<T>>> {
    let n = p.degree();
    let c: Vec<Complex<f64>> = p.coeffs().iter().map(|&c| to_c64(c)).collect();
    let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex::one();
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / c[n];
    }
    let eig = m
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("companion eigenvalues failed".into()))?;
    Ok(eig.iter().map(|&e| polish(p, from_c64(e))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;

    fn p(c: &[f64]) -> Polynomial<f64> {
        Polynomial::from_real(c)
    }

    fn assert_roots(found: Vec<Cx<f64>>, expected: &[(f64, f64)], tol: f64) {
        assert_eq!(found.len(), expected.len());
        for &(re, im) in expected {
            let e = Cx::new(re, im);
            assert!(found.iter().any(|r| (r - e).norm() <= tol), "missing {e} in {found:?}");
        }
    }

    #[test]
    fn examples() {
        assert_roots(poly_roots(&p(&[-1.0, 0.0, 1.0])).unwrap(), &[(1.0, 0.0), (-1.0, 0.0)], 1e-12);
        assert_roots(poly_roots(&p(&[0.0, 0.0, 1.0])).unwrap(), &[(0.0, 0.0), (0.0, 0.0)], 0.0);
        assert_roots(
            poly_roots(&p(&[-6.0, 11.0, -6.0, 1.0])).unwrap(),
            &[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)],
            1e-10,
        );
        assert_eq!(poly_roots(&Polynomial::<f64>::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn residual_contract_with_multiplicity() {
        // (z-1)^4 (z+2i)
        let q = Polynomial::from_roots(&[creal(1.0), creal(1.0), creal(1.0), creal(1.0), Cx::new(0.0, 2.0)]);
        let tol = Tolerances::default();
        for r in poly_roots(&q).unwrap() {
            assert!(q.eval(r).norm() <= root_residual_bound(&q, r, &tol));
        }
        let d = distinct_roots(&q, &tol).unwrap();
        assert_eq!(d.len(), 2);
        let one = d.iter().find(|(r, _)| (r - creal(1.0)).norm() < 1e-8).unwrap();
        assert_eq!(one.1, 4);
    }

    #[test]
    fn companion_fallback_agrees() {
        let q = p(&[-6.0, 11.0, -6.0, 1.0]);
        assert_roots(companion_roots(&q).unwrap(), &[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)], 1e-10);
    }

    #[test]
    fn single_precision() {
        let q = Polynomial::<f32>::from_real(&[-1.0, 0.0, 1.0]);
        let r = poly_roots(&q).unwrap();
        assert!((r[0] + creal(1.0f32)).norm() < 1e-5);
        assert!((r[1] - creal(1.0f32)).norm() < 1e-5);
    }
}
