//! Numerical tolerances. Every threshold used by the library lives here so
//! that callers can override them in one place.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Thresholds shared by the polynomial, equation and analysis layers.
///
/// Values are stored as `f64` and converted to the working scalar at use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Coefficient cutoff used when trimming polynomials.
    pub coeff: f64,
    /// Relative remainder cutoff in approximate GCD computations.
    pub gcd: f64,
    /// Residual factor accepted for computed roots.
    pub root: f64,
    /// Remainder cutoff for synthetic division in valuations.
    pub val: f64,
    /// Distance under which two points are considered equal.
    pub merge: f64,
    /// Minimum distance between a continuation path and a critical point.
    pub path: f64,
    /// Agreement required between tracked and recomputed branch values.
    pub track: f64,
    /// Residual bound for implicit derivatives (scaled by coefficient size).
    pub deriv: f64,
    /// Absolute stopping tolerance for the circle quadrature.
    pub quad: f64,
    /// Relative margin kept between a radius and critical moduli.
    pub radius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            coeff: 1e-10,
            gcd: 1e-8,
            root: 1e-10,
            val: 1e-8,
            merge: 1e-7,
            path: 1e-3,
            track: 1e-9,
            deriv: 1e-7,
            quad: 1e-6,
            radius: 1e-3,
        }
    }
}

impl Tolerances {
    /// Defaults adapted to the precision of `T`.
    ///
    /// Double precision gets the defaults unchanged; single precision uses
    /// looser thresholds since its unit roundoff is about 1e-7.
    pub fn for_scalar<T: Scalar>() -> Self {
        if T::epsilon().to_f64_lossy() <= 1e-12 {
            Self::default()
        } else {
            Self {
                coeff: 1e-5,
                gcd: 1e-3,
                root: 1e-4,
                val: 1e-3,
                merge: 1e-2,
                path: 1e-2,
                track: 1e-3,
                deriv: 1e-2,
                quad: 1e-3,
                radius: 1e-3,
            }
        }
    }
}
