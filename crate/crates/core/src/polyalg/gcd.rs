//! Approximate GCD by a normalized Euclidean remainder sequence.

use super::polynomial::Polynomial;
use crate::scalar::{creal, Scalar};

/// Monic approximate GCD of `p` and `q`.
///
/// Each remainder is compared against the (unit-norm) dividend; once it
/// falls below `tol` the current divisor is returned. Coprime inputs give 1.
pub fn approx_gcd<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>, tol: T) -> Polynomial<T> {
    match (p.is_zero(), q.is_zero()) {
        (true, true) => return Polynomial::one(),
        (true, false) => return q.monic(),
        (false, true) => return p.monic(),
        _ => {}
    }
    let (mut a, mut b) = if p.degree() >= q.degree() {
        (p.normalized(), q.normalized())
    } else {
        (q.normalized(), p.normalized())
    };
    loop {
        if b.degree() == 0 {
            return Polynomial::one();
        }
        let r = match a.div_rem(&b) {
            Ok((_, r)) => r,
            Err(_) => return Polynomial::one(),
        };
        // negligible top coefficients are noise from the cancellation
        let r = r.chop(tol * T::lit(1e-2));
        if r.is_zero() || r.norm2() <= tol {
            return b.monic();
        }
        a = b;
        b = r.normalized();
    }
}

/// Residual of `g` as a divisor of `p`: the remainder norm relative to `p`.
pub fn division_residual<T: Scalar>(p: &Polynomial<T>, g: &Polynomial<T>) -> T {
    if p.is_zero() {
        return T::zero();
    }
    match p.normalized().div_rem(g) {
        Ok((_, r)) => r.norm2(),
        Err(_) => T::infinity(),
    }
}

/// Approximate GCD of a list of polynomials (zero entries ignored).
pub fn approx_gcd_many<T: Scalar>(ps: &[Polynomial<T>], tol: T) -> Polynomial<T> {
    let mut it = ps.iter().filter(|p| !p.is_zero());
    let Some(first) = it.next() else {
        return Polynomial::one();
    };
    let mut g = first.monic();
    for p in it {
        if g.degree() == 0 {
            break;
        }
        g = approx_gcd(&g, p, tol);
    }
    if g.degree() == 0 {
        Polynomial::constant(creal(T::one()))
    } else {
        g
    }
}
