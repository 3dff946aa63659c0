//! Polynomial and rational-function arithmetic over complex floating point:
//! roots, approximate GCD, valuations and Sylvester resultants.

mod bivariate;
mod gcd;
pub(crate) mod linalg;
mod polynomial;
mod rational;
mod resultant;
mod roots;
mod series;

pub use bivariate::BiPolynomial;
pub use gcd::{approx_gcd, approx_gcd_many, division_residual};
pub use linalg::{determinant, hadamard_bound};
pub use polynomial::Polynomial;
pub use rational::RationalFunction;
pub use resultant::{resultant_param, resultant_univariate, resultant_w, ParamPolynomial};
pub use roots::{distinct_roots, poly_roots, poly_roots_with, root_residual_bound};
pub use series::Series;
