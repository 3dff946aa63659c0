use std::fmt;

use num_traits::Zero;

use super::gcd::approx_gcd;
use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use crate::tolerance::Tolerances;

/// Quotient of two polynomials in `z`, reduced by approximate GCD with a
/// monic denominator.
#[derive(Clone, PartialEq)]
pub struct RationalFunction<T: Scalar> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let tol = Tolerances::for_scalar::<T>();
        if num.is_zero() {
            return Ok(Self { num, den: Polynomial::one() });
        }
        let g = approx_gcd(&num, &den, T::lit(tol.gcd));
        let rel = T::lit(tol.gcd).sqrt();
        let (num, den) = if g.degree() > 0 {
            (num.div_exact(&g, rel)?, den.div_exact(&g, rel)?)
        } else {
            (num, den)
        };
        let lc = den.leading();
        Ok(Self { num: num.scale(Cx::from(T::one()) / lc), den: den.monic() })
    }

    pub fn from_poly(p: Polynomial<T>) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn num(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value when numerator and denominator both have degree 0.
    pub fn as_constant(&self) -> Option<Cx<T>> {
        if self.num.is_zero() {
            return Some(Cx::zero());
        }
        (self.num.degree() == 0 && self.den.degree() == 0).then(|| self.num.coeff(0) / self.den.coeff(0))
    }

    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.num.eval(z) / self.den.eval(z)
    }
}

impl<T: Scalar> fmt::Debug for RationalFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;

    #[test]
    fn reduces_common_factor() {
        let num = Polynomial::from_roots(&[creal(1.0), creal(2.0)]).scale(creal(3.0));
        let den = Polynomial::from_roots(&[creal(1.0)]).scale(creal(2.0));
        let r = RationalFunction::new(num, den).unwrap();
        assert_eq!(r.den().degree(), 0);
        assert!(r.num().max_diff(&Polynomial::from_real(&[-3.0, 1.5])) < 1e-12);
        assert!(RationalFunction::new(Polynomial::<f64>::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn constant_detection() {
        let r = RationalFunction::new(Polynomial::<f64>::from_real(&[2.0, 2.0]), Polynomial::from_real(&[4.0, 4.0])).unwrap();
        assert!((r.as_constant().unwrap() - creal(0.5)).norm() < 1e-12);
    }
}
