//! Symbolic–numeric toolkit for `v`-valued algebroid functions
//! `Σ B_t(z) W^t = 0` with polynomial coefficients.
//!
//! The numeric core is generic over the real scalar ([`Scalar`], implemented
//! for `f32` and `f64`); the aliases at the crate root fix `f64`, which is
//! what the analysis layers and the CLI use.

pub mod combinatorics;
pub mod continuation;
pub mod equation;
pub mod error;
pub mod local;
pub mod mapping;
pub mod nevanlinna;
pub mod polyalg;
pub mod scalar;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Cx, Scalar};
pub use tolerance::Tolerances;

/// Double-precision complex number.
pub type C64 = num_complex::Complex<f64>;
pub type Poly = polyalg::Polynomial<f64>;
pub type BiPoly = polyalg::BiPolynomial<f64>;
pub type Rational = polyalg::RationalFunction<f64>;
pub type Equation = equation::AlgebroidEquation<f64>;
pub type Map = mapping::MapExpr<f64>;
pub type Target = mapping::SmallFunctionTarget<f64>;
