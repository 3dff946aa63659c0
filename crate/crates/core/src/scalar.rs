//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the library is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
}

/// Complex number over a [`Scalar`].
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn creal<T: Scalar>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// Widen a complex value to `f64` precision.
#[inline]
pub(crate) fn to_c64<T: Scalar>(z: Cx<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

#[inline]
pub(crate) fn from_c64<T: Scalar>(z: Complex<f64>) -> Cx<T> {
    Complex::new(T::lit(z.re), T::lit(z.im))
}
