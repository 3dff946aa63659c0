use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{creal, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Dense univariate polynomial with complex coefficients, ascending degree.
///
/// The top coefficient is never negligible relative to the largest one
/// (cutoff `τ_coeff`); the zero polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Scalar> Polynomial<T> {
    /// Build from ascending coefficients, trimming negligible top terms with
    /// the default coefficient tolerance.
    pub fn new(coeffs: Vec<Cx<T>>) -> Self {
        Self::with_cutoff(coeffs, T::lit(Tolerances::for_scalar::<T>().coeff))
    }

    /// Build from ascending coefficients, dropping top terms whose modulus is
    /// at most `rel` times the largest coefficient modulus.
    pub fn with_cutoff(mut coeffs: Vec<Cx<T>>, rel: T) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max);
        if max == T::zero() {
            return Self { coeffs: Vec::new() };
        }
        while let Some(top) = coeffs.last() {
            if top.norm() <= rel * max {
                coeffs.pop();
            } else {
                break;
            }
        }
        Self { coeffs }
    }

    /// Build from real coefficients (ascending).
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| creal(T::lit(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Cx::one())
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![Cx::zero(), Cx::one()])
    }

    /// `c · z^k`.
    pub fn monomial(c: Cx<T>, k: usize) -> Self {
        let mut v = vec![Cx::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Cx<T>]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::new(vec![-r, Cx::one()]))
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Cx<T>> {
        self.coeffs
    }

    /// Coefficient of `z^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Cx::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Cx<T> {
        self.coeffs.last().copied().unwrap_or_else(Cx::zero)
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    pub fn norm2(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.coeffs.iter().rev().fold(Cx::zero(), |acc, &c| acc * z + c)
    }

    /// `Σ |c_k| |z|^k`, the natural scale of `eval(z)` for rounding purposes.
    pub fn eval_abs(&self, z: Cx<T>) -> T {
        let r = z.norm();
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * T::lit(k as f64))
            .collect();
        Self::new(v)
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divide by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|&c| c / lc).collect())
    }

    /// Coefficient-wise modulus, as real-valued complex coefficients.
    pub fn abs(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| creal(c.norm())).collect() }
    }

    /// Scale to unit 2-norm.
    pub fn normalized(&self) -> Self {
        let n = self.norm2();
        if n == T::zero() {
            return Self::zero();
        }
        self.scale(creal(T::one() / n))
    }

    /// Zero every coefficient of modulus at most `threshold` (absolute).
    pub fn chop(&self, threshold: T) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.norm() <= threshold { Cx::zero() } else { c })
                .collect(),
        )
    }

    /// Polynomial long division, `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.coeffs.len();
        let m = d.coeffs.len();
        if n < m {
            return Ok((Self::zero(), self.clone()));
        }
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![Cx::zero(); n - m + 1];
        for k in (0..=n - m).rev() {
            let f = rem[k + m - 1] / lc;
            q[k] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j] - f * dc;
            }
            rem[k + m - 1] = Cx::zero();
        }
        rem.truncate(m - 1);
        // Remainder is judged against the dividend, not against itself.
        let scale = self.max_abs();
        let cut = T::lit(Tolerances::for_scalar::<T>().coeff) * scale;
        let rem: Vec<_> = rem.into_iter().map(|c| if c.norm() <= cut { Cx::zero() } else { c }).collect();
        Ok((Self::new(q), Self::new(rem)))
    }

    /// Exact division; fails when the remainder exceeds `rel` times the
    /// dividend's coefficient scale.
    pub fn div_exact(&self, d: &Self, rel: T) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.max_abs() > rel * self.max_abs().max(T::min_positive_value()) {
            return Err(Error::Numerical(format!(
                "inexact polynomial division (remainder {:e})",
                r.max_abs().to_f64_lossy()
            )));
        }
        Ok(q)
    }

    /// Multiplicity of `z0` as a root: the number of successive synthetic
    /// divisions by `(z − z0)` whose remainder is negligible at `τ_val`.
    pub fn valuation(&self, z0: Cx<T>) -> Result<usize> {
        self.valuation_with(z0, T::lit(Tolerances::for_scalar::<T>().val))
    }

    pub fn valuation_with(&self, z0: Cx<T>, tol: T) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut cur = self.coeffs.clone();
        let mut k = 0;
        while cur.len() > 1 {
            // synthetic division by (z - z0)
            let n = cur.len();
            let mut quot = vec![Cx::zero(); n - 1];
            let mut acc = Cx::zero();
            for i in (0..n).rev() {
                acc = acc * z0 + cur[i];
                if i > 0 {
                    quot[i - 1] = acc;
                }
            }
            let r = z0.norm();
            let scale = cur.iter().rev().fold(T::zero(), |a, c| a * r + c.norm());
            if acc.norm() > tol * scale {
                break;
            }
            k += 1;
            cur = quot;
        }
        Ok(k)
    }

    /// Lift to a polynomial over `U` via `f64`.
    pub fn cast<U: Scalar>(&self) -> Polynomial<U> {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| Cx::new(U::lit(c.re.to_f64_lossy()), U::lit(c.im.to_f64_lossy())))
                .collect(),
        )
    }

    /// Coefficient-wise distance `max |a_k − b_k|`.
    pub fn max_diff(&self, other: &Self) -> T {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(T::zero(), T::max)
    }

    /// True when `self` and `other` agree up to a nonzero scalar multiple,
    /// judged at relative tolerance `rel`.
    pub fn proportional_to(&self, other: &Self, rel: T) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return true,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        if self.degree() != other.degree() {
            return false;
        }
        let ratio = self.leading() / other.leading();
        self.max_diff(&other.scale(ratio)) <= rel * self.max_abs()
    }
}

impl<T: Scalar> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs.iter().map(|c| (c.re, c.im)).collect::<Vec<_>>())
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Cx::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Self) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
