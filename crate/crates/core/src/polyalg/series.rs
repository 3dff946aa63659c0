//! Truncated power series in `h = z − z0`.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::bivariate::BiPolynomial;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{creal, Cx, Scalar};

/// Coefficients `c_0 … c_{n}` of a series truncated after order `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T: Scalar> {
    c: Vec<Cx<T>>,
}

impl<T: Scalar> Series<T> {
    pub fn new(c: Vec<Cx<T>>) -> Self {
        assert!(!c.is_empty(), "series needs at least one coefficient");
        Self { c }
    }

    pub fn constant(v: Cx<T>, order: usize) -> Self {
        let mut c = vec![Cx::zero(); order + 1];
        c[0] = v;
        Self { c }
    }

    /// The series of `h` itself.
    pub fn variable(order: usize) -> Self {
        let mut c = vec![Cx::zero(); order + 1];
        if order >= 1 {
            c[1] = Cx::one();
        }
        Self { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.c.get(k).copied().unwrap_or_else(Cx::zero)
    }

    pub fn set(&mut self, k: usize, v: Cx<T>) {
        self.c[k] = v;
    }

    /// `k`-th derivative at the expansion point: `k! · c_k`.
    pub fn derivative_value(&self, k: usize) -> Cx<T> {
        let fact = (1..=k).fold(T::one(), |acc, i| acc * T::lit(i as f64));
        self.coeff(k) * fact
    }

    /// Term-wise derivative; the order drops by one.
    pub fn differentiate(&self) -> Self {
        if self.c.len() == 1 {
            return Self::constant(Cx::zero(), 0);
        }
        Self::new((1..self.c.len()).map(|k| self.c[k] * T::lit(k as f64)).collect())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new((0..=order).map(|k| self.coeff(k)).collect())
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.c.iter().map(|&v| v * s).collect())
    }

    pub fn recip(&self) -> Result<Self> {
        let a0 = self.c[0];
        if a0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.c.len();
        let mut out = vec![Cx::zero(); n];
        out[0] = Cx::<T>::one() / a0;
        for k in 1..n {
            let s = (1..=k).fold(Cx::<T>::zero(), |acc, j| acc + self.c[j] * out[k - j]);
            out[k] = -s / a0;
        }
        Ok(Self::new(out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// `p(z0 + h)` as a series of the given order.
    pub fn of_polynomial(p: &Polynomial<T>, z0: Cx<T>, order: usize) -> Self {
        let h = Self::variable(order);
        let base = &Self::constant(z0, order) + &h;
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::constant(Cx::zero(), order), |acc, &c| &(&acc * &base) + &Self::constant(c, order))
    }

    /// `P(z0 + h, w(h))` for a bivariate polynomial and a series `w`.
    pub fn of_bivariate(p: &BiPolynomial<T>, z0: Cx<T>, w: &Self) -> Self {
        let order = w.order();
        p.cols().iter().rev().fold(Self::constant(Cx::zero(), order), |acc, col| {
            &(&acc * w) + &Self::of_polynomial(col, z0, order)
        })
    }

    pub fn max_abs(&self) -> T {
        self.c.iter().map(|v| v.norm()).fold(T::zero(), T::max)
    }

    pub fn powu(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(creal(T::one()), self.order()), |acc, _| &acc * self)
    }
}

impl<T: Scalar> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: Self) -> Series<T> {
        let n = self.c.len().min(rhs.c.len());
        Series::new((0..n).map(|k| self.c[k] + rhs.c[k]).collect())
    }
}

impl<T: Scalar> Sub for &Series<T> {
    type Output = Series<T>;
    fn sub(self, rhs: Self) -> Series<T> {
        let n = self.c.len().min(rhs.c.len());
        Series::new((0..n).map(|k| self.c[k] - rhs.c[k]).collect())
    }
}

impl<T: Scalar> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: Self) -> Series<T> {
        let n = self.c.len().min(rhs.c.len());
        Series::new(
            (0..n)
                .map(|k| (0..=k).fold(Cx::zero(), |acc, j| acc + self.c[j] * rhs.c[k - j]))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_expansion() {
        // z^3 at z0 = 2: 8 + 12h + 6h^2 + h^3
        let p = Polynomial::<f64>::from_real(&[0.0, 0.0, 0.0, 1.0]);
        let s = Series::of_polynomial(&p, creal(2.0), 3);
        let expect = [8.0, 12.0, 6.0, 1.0];
        for (k, e) in expect.iter().enumerate() {
            assert!((s.coeff(k) - creal(*e)).norm() < 1e-12);
        }
        assert!((s.derivative_value(2) - creal(12.0)).norm() < 1e-12);
    }

    #[test]
    fn reciprocal() {
        // 1/(1 - h) = 1 + h + h^2 + ...
        let s = Series::new(vec![creal(1.0), creal(-1.0), creal(0.0), creal(0.0)]);
        let r = s.recip().unwrap();
        assert!(r.coeffs().iter().all(|c| (c - creal(1.0)).norm() < 1e-14));
        assert!(Series::<f64>::constant(creal(0.0), 2).recip().is_err());
    }
}
