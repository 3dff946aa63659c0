//! The algebroid equation `Ψ(z, W) = Σ_t B_t(z) W^t = 0` in cleared form:
//! normalization, identity and squarefree tests, discriminant, eliminant,
//! critical points and pointwise branch values.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyalg::{
    approx_gcd, approx_gcd_many, distinct_roots, poly_roots_with, resultant_w, BiPolynomial, Polynomial,
    RationalFunction,
};
use crate::scalar::{Cx, Scalar};
use crate::tolerance::Tolerances;

/// A point of the extended complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended<T: Scalar> {
    Finite(Cx<T>),
    Infinity,
}

impl<T: Scalar> Extended<T> {
    pub fn finite(self) -> Option<Cx<T>> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }
}

/// Cleared coefficients `B_0 … B_v` of a `v`-valued algebroid function.
///
/// Invariants: `B_v ≢ 0`, and the `B_t` have no common root. The overall
/// scalar is whatever the caller supplied unless [`AlgebroidEquation::standardize`]
/// or [`AlgebroidEquation::normalized`] fixed it.
#[derive(Clone, PartialEq)]
pub struct AlgebroidEquation<T: Scalar> {
    coeffs: Vec<Polynomial<T>>,
    tol: Tolerances,
}

/// Why a point belongs to the critical set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriticalReason {
    /// Root of the discriminant: two branches meet.
    Discriminant,
    /// Root of the leading coefficient: some branch has a pole.
    LeadingCoefficient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint<T: Scalar> {
    pub z: Cx<T>,
    pub reasons: Vec<CriticalReason>,
}

/// Finite critical points `S_W`; every other point is regular.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSet<T: Scalar> {
    pub points: Vec<CriticalPoint<T>>,
}

impl<T: Scalar> CriticalSet<T> {
    pub fn locations(&self) -> impl Iterator<Item = Cx<T>> + '_ {
        self.points.iter().map(|p| p.z)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance from `z` to the nearest critical point (infinite when empty).
    pub fn distance(&self, z: Cx<T>) -> T {
        self.locations().map(|c| (c - z).norm()).fold(T::infinity(), T::min)
    }

    pub fn contains(&self, z: Cx<T>, tol: T) -> bool {
        self.distance(z) <= tol
    }
}

/// Outcome of [`AlgebroidEquation::is_identical`].
#[derive(Clone, Debug, PartialEq)]
pub struct Identity<T: Scalar> {
    pub identical: bool,
    /// Common coefficient ratio `E = B¹_t / B²_t` when identical.
    pub ratio: Option<RationalFunction<T>>,
}

impl<T: Scalar> Identity<T> {
    /// The ratio as a constant, when it reduces to one.
    pub fn constant_ratio(&self) -> Option<Cx<T>> {
        self.ratio.as_ref().and_then(|r| r.as_constant())
    }
}

/// Outcome of [`AlgebroidEquation::squarefree_test`].
#[derive(Clone, Debug, PartialEq)]
pub struct Squarefree<T: Scalar> {
    pub squarefree: bool,
    /// `gcd(Ψ, Ψ_W)` when it is nonconstant.
    pub repeated_part: Option<BiPolynomial<T>>,
}

impl<T: Scalar> AlgebroidEquation<T> {
    /// Equation from cleared coefficients `B_0 … B_v`.
    ///
    /// Zero top coefficients are dropped and any common polynomial factor of
    /// the coefficients is removed; the scalar multiple is kept.
    pub fn new(coeffs: Vec<Polynomial<T>>) -> Result<Self> {
        Self::with_tolerances(coeffs, Tolerances::for_scalar::<T>())
    }

    pub fn with_tolerances(mut coeffs: Vec<Polynomial<T>>, tol: Tolerances) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroEquation);
        }
        if coeffs.len() == 1 {
            return Err(Error::Degenerate("equation has no W term".into()));
        }
        let g = approx_gcd_many(&coeffs, T::lit(tol.gcd));
        if g.degree() > 0 {
            let rel = T::lit(tol.gcd).sqrt();
            coeffs = coeffs
                .iter()
                .map(|c| if c.is_zero() { Ok(Polynomial::zero()) } else { c.div_exact(&g, rel) })
                .collect::<Result<_>>()?;
        }
        Ok(Self { coeffs, tol })
    }

    /// Equation from real coefficient lists, `coeffs[t][i]` multiplying `z^i W^t`.
    pub fn from_real(coeffs: &[&[f64]]) -> Result<Self> {
        Self::new(coeffs.iter().map(|c| Polynomial::from_real(c)).collect())
    }

    /// Clear denominators of `A_t(z)` (lowest power of `W` first), remove
    /// common factors and fix the scalar so the top `z`-coefficient of `B_v`
    /// is 1.
    pub fn standardize(raw: &[RationalFunction<T>]) -> Result<Self> {
        if raw.iter().all(|r| r.is_zero()) {
            return Err(Error::ZeroEquation);
        }
        let tol = Tolerances::for_scalar::<T>();
        let rel = T::lit(tol.gcd).sqrt();
        // least common multiple of the denominators
        let mut lcm = Polynomial::one();
        for r in raw {
            let d = r.den();
            let g = approx_gcd(&lcm, d, T::lit(tol.gcd));
            lcm = &lcm * &d.div_exact(&g, rel)?;
        }
        let coeffs = raw
            .iter()
            .map(|r| Ok(r.num() * &lcm.div_exact(r.den(), rel)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs)?.normalized())
    }

    /// Same equation with the scalar fixed: the top `z`-coefficient of `B_v` is 1.
    pub fn normalized(&self) -> Self {
        let lc = self.leading().leading();
        Self {
            coeffs: self.coeffs.iter().map(|c| c.scale(Cx::<T>::from(T::one()) / lc)).collect(),
            tol: self.tol,
        }
    }

    pub fn from_bivariate(p: &BiPolynomial<T>) -> Result<Self> {
        Self::new(p.cols().to_vec())
    }

    pub fn to_bivariate(&self) -> BiPolynomial<T> {
        BiPolynomial::new(self.coeffs.clone())
    }

    /// Number of sheets `v`.
    pub fn v(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, t: usize) -> &Polynomial<T> {
        &self.coeffs[t]
    }

    pub fn leading(&self) -> &Polynomial<T> {
        &self.coeffs[self.v()]
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn set_tolerances(&mut self, tol: Tolerances) {
        self.tol = tol;
    }

    pub fn eval(&self, z: Cx<T>, w: Cx<T>) -> Cx<T> {
        self.coeffs.iter().rev().fold(Cx::zero(), |acc, c| acc * w + c.eval(z))
    }

    /// `Ψ(z0, W)` as a polynomial in `W`, with coefficients negligible
    /// relative to the largest one removed from the top.
    pub fn at(&self, z0: Cx<T>) -> Polynomial<T> {
        let vals: Vec<_> = self.coeffs.iter().map(|c| c.eval(z0)).collect();
        let scale = self.coeffs.iter().map(|c| c.eval_abs(z0)).fold(T::zero(), T::max);
        let cut = T::lit(self.tol.coeff) * scale;
        let mut vals = vals;
        while vals.last().is_some_and(|c| c.norm() <= cut) {
            vals.pop();
        }
        Polynomial::with_cutoff(vals, T::zero())
    }

    /// The `v` values of `W` over `z0`, with infinite values where the
    /// leading coefficient vanishes. Sorted by real then imaginary part.
    pub fn roots_at(&self, z0: Cx<T>) -> Result<Vec<Extended<T>>> {
        let p = self.at(z0);
        if p.is_zero() {
            return Err(Error::Numerical(format!("all coefficients vanish at {z0}")));
        }
        let finite = poly_roots_with(&p, &self.tol)?;
        let mut out: Vec<_> = finite.into_iter().map(Extended::Finite).collect();
        out.extend(std::iter::repeat_n(Extended::Infinity, self.v() - p.degree()));
        Ok(out)
    }

    /// Finite branch values over `z0`; errors when a branch is infinite.
    pub fn finite_roots_at(&self, z0: Cx<T>) -> Result<Vec<Cx<T>>> {
        self.roots_at(z0)?
            .into_iter()
            .map(|r| r.finite().ok_or_else(|| Error::Precondition(format!("pole of W over {z0}"))))
            .collect()
    }

    /// `Res_W(Ψ, ∂Ψ/∂W)`.
    pub fn discriminant(&self) -> Result<Polynomial<T>> {
        if self.v() < 2 {
            return Err(Error::DiscriminantUndefined);
        }
        let p = self.to_bivariate();
        resultant_w(&p, &p.partial_w())
    }

    /// `Res_W(Ψ₁, Ψ₂)`; identically zero iff the two share a branch.
    pub fn eliminant(&self, other: &Self) -> Polynomial<T> {
        resultant_w(&self.to_bivariate(), &other.to_bivariate())
            .expect("equations have positive degree in W")
    }

    /// Whether the coefficients are proportional, with the ratio `E`.
    pub fn is_identical(&self, other: &Self) -> Identity<T> {
        let no = Identity { identical: false, ratio: None };
        if self.v() != other.v() {
            return no;
        }
        let (a_lead, b_lead) = (self.leading(), other.leading());
        let rel = T::lit(self.tol.gcd);
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if a.is_zero() != b.is_zero() {
                return no;
            }
            let cross = &(a * b_lead) - &(b * a_lead);
            let scale = (a * b_lead).max_abs().max((b * a_lead).max_abs());
            if cross.max_abs() > rel * scale {
                return no;
            }
        }
        let ratio = RationalFunction::new(a_lead.clone(), b_lead.clone()).ok();
        Identity { identical: true, ratio }
    }

    /// Squarefree in `W` over the function field, with `gcd(Ψ, Ψ_W)` as
    /// witness when not.
    pub fn squarefree_test(&self) -> Result<Squarefree<T>> {
        if self.v() == 1 {
            return Ok(Squarefree { squarefree: true, repeated_part: None });
        }
        if !self.discriminant()?.is_zero() {
            return Ok(Squarefree { squarefree: true, repeated_part: None });
        }
        let p = self.to_bivariate();
        let g = p.gcd(&p.partial_w())?;
        if g.deg_w() == 0 {
            return Err(Error::Numerical(
                "discriminant vanishes but no repeated factor was found".into(),
            ));
        }
        Ok(Squarefree { squarefree: false, repeated_part: Some(g) })
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.squarefree_test()?.squarefree)
    }

    /// `Ψ / gcd(Ψ, Ψ_W)`: the equation of the distinct branches.
    pub fn squarefree_part(&self) -> Result<Self> {
        match self.squarefree_test()?.repeated_part {
            None => Ok(self.clone()),
            Some(g) => {
                let mut e = Self::from_bivariate(&self.to_bivariate().div_exact(&g)?)?;
                e.tol = self.tol;
                Ok(e)
            }
        }
    }

    /// Roots of the leading coefficient (where branches have poles).
    pub fn poles(&self) -> Result<Vec<(Cx<T>, usize)>> {
        distinct_roots(self.leading(), &self.tol)
    }

    /// Discriminant roots and leading-coefficient roots, merged within `τ_merge`.
    pub fn critical_points(&self) -> Result<CriticalSet<T>> {
        if !self.is_squarefree()? {
            return Err(Error::NotSquarefree);
        }
        let merge = T::lit(self.tol.merge);
        let mut points: Vec<CriticalPoint<T>> = Vec::new();
        let mut add = |z: Cx<T>, reason: CriticalReason| {
            let slack = merge * (T::one() + z.norm());
            if let Some(p) = points.iter_mut().find(|p| (p.z - z).norm() <= slack) {
                if !p.reasons.contains(&reason) {
                    p.reasons.push(reason);
                }
            } else {
                points.push(CriticalPoint { z, reasons: vec![reason] });
            }
        };
        if self.v() >= 2 {
            for (z, _) in distinct_roots(&self.discriminant()?, &self.tol)? {
                add(z, CriticalReason::Discriminant);
            }
        }
        for (z, _) in self.poles()? {
            add(z, CriticalReason::LeadingCoefficient);
        }
        Ok(CriticalSet { points })
    }
}

impl<T: Scalar> fmt::Debug for AlgebroidEquation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebroidEquation").field("coeffs", &self.coeffs).finish()
    }
}

impl<T: Scalar> fmt::Display for AlgebroidEquation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if t < self.v() {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]W^{t}")?;
        }
        Ok(())
    }
}
