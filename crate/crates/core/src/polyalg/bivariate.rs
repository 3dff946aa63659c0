use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::{approx_gcd, approx_gcd_many};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{creal, Cx, Scalar};
use crate::tolerance::Tolerances;

/// Polynomial in two variables `(z, w)`, stored as a polynomial in `w` whose
/// coefficients are polynomials in `z`.
///
/// The same type is reused for `(z, x)` when `x` is a parameter.
#[derive(Clone, PartialEq)]
pub struct BiPolynomial<T: Scalar> {
    cols: Vec<Polynomial<T>>,
}

impl<T: Scalar> BiPolynomial<T> {
    /// From coefficient polynomials in `z`, indexed by the power of `w`.
    pub fn new(mut cols: Vec<Polynomial<T>>) -> Self {
        while cols.last().is_some_and(|c| c.is_zero()) {
            cols.pop();
        }
        Self { cols }
    }

    /// From a coefficient grid, `grid[i][j]` multiplying `z^i w^j`.
    pub fn from_grid(grid: &[Vec<Cx<T>>]) -> Self {
        let width = grid.iter().map(|r| r.len()).max().unwrap_or(0);
        let cols = (0..width)
            .map(|j| Polynomial::new(grid.iter().map(|row| row.get(j).copied().unwrap_or_else(Cx::zero)).collect()))
            .collect();
        Self::new(cols)
    }

    /// Coefficient grid, `grid[i][j]` multiplying `z^i w^j`.
    pub fn to_grid(&self) -> Vec<Vec<Cx<T>>> {
        let rows = self.cols.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
        (0..rows)
            .map(|i| self.cols.iter().map(|c| c.coeff(i)).collect())
            .collect()
    }

    pub fn zero() -> Self {
        Self { cols: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_z(Polynomial::one())
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::from_z(Polynomial::constant(c))
    }

    /// A polynomial in `z` alone.
    pub fn from_z(p: Polynomial<T>) -> Self {
        Self::new(vec![p])
    }

    /// The variable `w`.
    pub fn w() -> Self {
        Self::new(vec![Polynomial::zero(), Polynomial::one()])
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::from_z(Polynomial::z())
    }

    /// `p(z) · w^k`.
    pub fn term(p: Polynomial<T>, k: usize) -> Self {
        let mut cols = vec![Polynomial::zero(); k + 1];
        cols[k] = p;
        Self::new(cols)
    }

    pub fn cols(&self) -> &[Polynomial<T>] {
        &self.cols
    }

    /// Coefficient of `w^j`.
    pub fn coeff_w(&self, j: usize) -> Polynomial<T> {
        self.cols.get(j).cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn deg_w(&self) -> usize {
        self.cols.len().saturating_sub(1)
    }

    pub fn deg_z(&self) -> usize {
        self.cols.iter().filter(|c| !c.is_zero()).map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn leading_w(&self) -> Polynomial<T> {
        self.cols.last().cloned().unwrap_or_else(Polynomial::zero)
    }

    pub fn max_abs(&self) -> T {
        self.cols.iter().map(|c| c.max_abs()).fold(T::zero(), T::max)
    }

    pub fn eval(&self, z: Cx<T>, w: Cx<T>) -> Cx<T> {
        self.cols.iter().rev().fold(Cx::zero(), |acc, c| acc * w + c.eval(z))
    }

    /// Specialize `z = z0`, leaving a polynomial in `w`.
    pub fn at_z(&self, z0: Cx<T>) -> Polynomial<T> {
        Polynomial::with_cutoff(self.cols.iter().map(|c| c.eval(z0)).collect(), T::zero())
    }

    /// Specialize `w = w0`, leaving a polynomial in `z`.
    pub fn at_w(&self, w0: Cx<T>) -> Polynomial<T> {
        self.cols.iter().rev().fold(Polynomial::zero(), |acc, c| &acc.scale(w0) + c)
    }

    pub fn partial_z(&self) -> Self {
        Self::new(self.cols.iter().map(|c| c.derivative()).collect())
    }

    pub fn partial_w(&self) -> Self {
        Self::new(
            self.cols
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c.scale(creal(T::lit(j as f64))))
                .collect(),
        )
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.cols.iter().map(|c| c.scale(s)).collect())
    }

    pub fn mul_z(&self, p: &Polynomial<T>) -> Self {
        Self::new(self.cols.iter().map(|c| c * p).collect())
    }

    /// Multiply by `w^k`.
    pub fn shift_w(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut cols = vec![Polynomial::zero(); k];
        cols.extend(self.cols.iter().cloned());
        Self::new(cols)
    }

    /// Coefficient-wise modulus.
    pub fn abs(&self) -> Self {
        Self::new(self.cols.iter().map(|c| c.abs()).collect())
    }

    /// Zero every coefficient of modulus at most `threshold`.
    pub fn chop(&self, threshold: T) -> Self {
        Self::new(self.cols.iter().map(|c| c.chop(threshold)).collect())
    }

    /// Rescale so the largest coefficient has modulus one.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs();
        if m == T::zero() {
            return Self::zero();
        }
        self.scale(creal(T::one() / m))
    }

    /// Scale so that the top `z`-coefficient of the top `w`-coefficient is 1.
    pub fn leading_normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(Cx::<T>::one() / self.leading_w().leading())
    }

    /// GCD in `z` of all `w`-coefficients (monic; 1 when coprime).
    pub fn content(&self) -> Polynomial<T> {
        approx_gcd_many(&self.cols, T::lit(Tolerances::for_scalar::<T>().gcd))
    }

    /// Divide every `w`-coefficient exactly by `p(z)`.
    pub fn div_z(&self, p: &Polynomial<T>) -> Result<Self> {
        if p.degree() == 0 {
            return Ok(self.scale(Cx::<T>::one() / p.leading()));
        }
        let rel = T::lit(Tolerances::for_scalar::<T>().gcd).sqrt();
        let cols = self
            .cols
            .iter()
            .map(|c| if c.is_zero() { Ok(Polynomial::zero()) } else { c.div_exact(p, rel) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(cols))
    }

    /// Content-free part, rescaled to unit maximum coefficient.
    pub fn primitive_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        Ok(self.div_z(&self.content())?.normalized())
    }

    /// Exact division in `C[z][w]`. Fails when the remainder is not
    /// negligible relative to the dividend.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let tol = Tolerances::for_scalar::<T>();
        let rel = T::lit(tol.gcd).sqrt();
        let scale = self.max_abs();
        let lc = d.leading_w();
        let mut q = Self::zero();
        let mut r = self.clone();
        while !r.is_zero() && r.deg_w() >= d.deg_w() {
            let k = r.deg_w() - d.deg_w();
            let t = r.leading_w().div_exact(&lc, rel)?;
            let top = r.deg_w();
            q = &q + &Self::term(t.clone(), k);
            let mut next = &r - &d.mul_z(&t).shift_w(k);
            if next.cols.len() > top {
                next.cols.truncate(top);
                next = Self::new(next.cols);
            }
            r = next.chop(T::lit(tol.coeff) * scale);
        }
        if r.max_abs() > rel * scale {
            return Err(Error::Numerical("inexact bivariate division".into()));
        }
        Ok(q)
    }

    /// Approximate GCD in `C[z][w]`: GCD of contents times the GCD of the
    /// primitive parts from a primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let tol = T::lit(Tolerances::for_scalar::<T>().gcd);
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ok(Self::one()),
            (true, false) => return Ok(other.leading_normalized()),
            (false, true) => return Ok(self.leading_normalized()),
            _ => {}
        }
        let ca = self.content();
        let cb = other.content();
        let c = approx_gcd(&ca, &cb, tol);
        let pa = self.div_z(&ca)?.normalized();
        let pb = other.div_z(&cb)?.normalized();
        let g = prs_gcd(pa, pb, tol)?;
        Ok(g.mul_z(&c).leading_normalized())
    }

    /// True when `self − other·c` vanishes for the scalar `c` matching the
    /// leading coefficients, at relative tolerance `rel`.
    pub fn proportional_to(&self, other: &Self, rel: T) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return true,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        if self.deg_w() != other.deg_w() || self.leading_w().degree() != other.leading_w().degree() {
            return false;
        }
        let c = self.leading_w().leading() / other.leading_w().leading();
        (self - &other.scale(c)).max_abs() <= rel * self.max_abs()
    }
}

/// Primitive PRS GCD of two primitive polynomials in `w`.
fn prs_gcd<T: Scalar>(a: BiPolynomial<T>, b: BiPolynomial<T>, tol: T) -> Result<BiPolynomial<T>> {
    let (mut f, mut g) = if a.deg_w() >= b.deg_w() { (a, b) } else { (b, a) };
    loop {
        if g.is_zero() {
            return f.primitive_part();
        }
        if g.deg_w() == 0 {
            return Ok(BiPolynomial::one());
        }
        let r = pseudo_remainder(&f, &g, tol);
        if r.is_zero() {
            return g.primitive_part();
        }
        f = g;
        g = r.primitive_part()?;
    }
}

/// Pseudo-remainder of `f` by `g`, with negligible terms removed relative to
/// the magnitude of the eliminated products. The result is rescaled.
fn pseudo_remainder<T: Scalar>(f: &BiPolynomial<T>, g: &BiPolynomial<T>, tol: T) -> BiPolynomial<T> {
    let lc = g.leading_w();
    let mut r = f.clone();
    while !r.is_zero() && r.deg_w() >= g.deg_w() {
        let k = r.deg_w() - g.deg_w();
        let top = r.deg_w();
        let t1 = r.mul_z(&lc);
        let t2 = g.mul_z(&r.leading_w()).shift_w(k);
        let scale = t1.max_abs().max(t2.max_abs());
        let mut next = &t1 - &t2;
        next.cols.truncate(top);
        let next = BiPolynomial::new(next.cols).chop(tol * scale);
        if next.is_zero() {
            return next;
        }
        r = next.scale(creal(T::one() / scale));
    }
    r.normalized()
}

impl<T: Scalar> fmt::Debug for BiPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.cols.iter()).finish()
    }
}

impl<T: Scalar> Add for &BiPolynomial<T> {
    type Output = BiPolynomial<T>;
    fn add(self, rhs: Self) -> BiPolynomial<T> {
        let n = self.cols.len().max(rhs.cols.len());
        BiPolynomial::new((0..n).map(|j| &self.coeff_w(j) + &rhs.coeff_w(j)).collect())
    }
}

impl<T: Scalar> Sub for &BiPolynomial<T> {
    type Output = BiPolynomial<T>;
    fn sub(self, rhs: Self) -> BiPolynomial<T> {
        let n = self.cols.len().max(rhs.cols.len());
        BiPolynomial::new((0..n).map(|j| &self.coeff_w(j) - &rhs.coeff_w(j)).collect())
    }
}

impl<T: Scalar> Mul for &BiPolynomial<T> {
    type Output = BiPolynomial<T>;
    fn mul(self, rhs: Self) -> BiPolynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return BiPolynomial::zero();
        }
        let mut cols = vec![Polynomial::zero(); self.cols.len() + rhs.cols.len() - 1];
        for (i, a) in self.cols.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.cols.iter().enumerate() {
                cols[i + j] = &cols[i + j] + &(a * b);
            }
        }
        BiPolynomial::new(cols)
    }
}

impl<T: Scalar> Neg for &BiPolynomial<T> {
    type Output = BiPolynomial<T>;
    fn neg(self) -> BiPolynomial<T> {
        BiPolynomial::new(self.cols.iter().map(|c| -c).collect())
    }
}
