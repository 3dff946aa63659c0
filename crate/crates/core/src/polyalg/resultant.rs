//! Sylvester resultants computed by evaluation at roots of unity and exact
//! interpolation of the determinant values.

use num_traits::Zero;

use super::bivariate::BiPolynomial;
use super::linalg::{determinant, hadamard_bound};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use crate::tolerance::Tolerances;

/// Polynomial in `w` whose coefficients are polynomials in `(z, x)`.
///
/// Coefficient `k` multiplies `w^k`; inside it, the [`BiPolynomial`]'s second
/// variable plays the role of the parameter `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPolynomial<T: Scalar> {
    coeffs: Vec<BiPolynomial<T>>,
}

impl<T: Scalar> ParamPolynomial<T> {
    pub fn new(mut coeffs: Vec<BiPolynomial<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Embed a `(z, w)` polynomial with no dependence on the parameter.
    pub fn from_zw(p: &BiPolynomial<T>) -> Self {
        Self::new(p.cols().iter().map(|c| BiPolynomial::from_z(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[BiPolynomial<T>] {
        &self.coeffs
    }

    pub fn deg_w(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn deg_z(&self) -> usize {
        self.coeffs.iter().map(|c| c.deg_z()).max().unwrap_or(0)
    }

    fn deg_x(&self) -> usize {
        self.coeffs.iter().map(|c| c.deg_w()).max().unwrap_or(0)
    }

    fn at(&self, z: Cx<T>, x: Cx<T>) -> Vec<Cx<T>> {
        self.coeffs.iter().map(|c| c.eval(z, x)).collect()
    }
}

/// Sylvester matrix of two univariate coefficient vectors (ascending) with
/// formal degrees `len − 1`.
fn sylvester<T: Scalar>(p: &[Cx<T>], q: &[Cx<T>]) -> Vec<Vec<Cx<T>>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![Cx::zero(); size];
        for (k, &c) in p.iter().rev().enumerate() {
            row[shift + k] = c;
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Cx::zero(); size];
        for (k, &c) in q.iter().rev().enumerate() {
            row[shift + k] = c;
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two univariate polynomials given by ascending coefficients
/// (formal degrees are taken from the slice lengths).
pub fn resultant_univariate<T: Scalar>(p: &[Cx<T>], q: &[Cx<T>]) -> Cx<T> {
    if p.len() <= 1 && q.len() <= 1 {
        return Cx::from(T::one());
    }
    determinant(sylvester(p, q))
}

fn unit_roots<T: Scalar>(n: usize) -> Vec<Cx<T>> {
    (0..n)
        .map(|k| Cx::from_polar(T::one(), T::TAU() * T::lit(k as f64) / T::lit(n as f64)))
        .collect()
}

/// Resultant eliminating `w` from two parametric polynomials; the result is
/// a polynomial in `(z, x)`.
///
/// Coefficients below `τ_coeff` times the largest Hadamard bound met on the
/// interpolation grid are treated as rounding noise and set to zero.
pub fn resultant_param<T: Scalar>(p: &ParamPolynomial<T>, q: &ParamPolynomial<T>) -> BiPolynomial<T> {
    let tol = Tolerances::for_scalar::<T>();
    if p.coeffs.is_empty() || q.coeffs.is_empty() {
        return BiPolynomial::zero();
    }
    let (m, n) = (p.deg_w(), q.deg_w());
    let dz = n * p.deg_z() + m * q.deg_z();
    let dx = n * p.deg_x() + m * q.deg_x();
    let (nz, nx) = (dz + 1, dx + 1);
    let zs = unit_roots::<T>(nz);
    let xs = unit_roots::<T>(nx);
    let mut values = vec![vec![Cx::zero(); nx]; nz];
    let mut scale = T::zero();
    for (a, &z) in zs.iter().enumerate() {
        for (b, &x) in xs.iter().enumerate() {
            let s = sylvester(&p.at(z, x), &q.at(z, x));
            scale = scale.max(hadamard_bound(&s));
            values[a][b] = if s.is_empty() { Cx::from(T::one()) } else { determinant(s) };
        }
    }
    // inverse DFT in both directions
    let inv = T::one() / T::lit((nz * nx) as f64);
    let cut = T::lit(tol.coeff) * scale;
    let mut grid = vec![vec![Cx::zero(); nx]; nz];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Cx::zero();
            for (a, &z) in zs.iter().enumerate() {
                let zi = z.powu(i as u32).conj();
                for (b, &x) in xs.iter().enumerate() {
                    acc = acc + values[a][b] * zi * x.powu(j as u32).conj();
                }
            }
            let c = acc * inv;
            *cell = if c.norm() <= cut { Cx::zero() } else { c };
        }
    }
    BiPolynomial::from_grid(&grid)
}

/// `Res_w(P, Q)` for polynomials in `(z, w)`, returned as a polynomial in `z`.
///
/// Both inputs must have positive degree in `w`.
pub fn resultant_w<T: Scalar>(p: &BiPolynomial<T>, q: &BiPolynomial<T>) -> Result<Polynomial<T>> {
    if p.is_zero() || q.is_zero() || p.deg_w() == 0 || q.deg_w() == 0 {
        return Err(Error::Degenerate("resultant needs positive degree in w for both inputs".into()));
    }
    Ok(resultant_param(&ParamPolynomial::from_zw(p), &ParamPolynomial::from_zw(q)).coeff_w(0))
}
