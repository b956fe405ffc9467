//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
///
/// The two tolerance hooks are what the structural checks (Hermiticity,
/// normalisation, X-form detection, PSD) compare against. They are tuned to the
/// precision of the type so that the same generic code validates sensibly in
/// both widths.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Tolerance for exact structural identities (unit norm, Hermiticity, PSD).
    fn strict_tol() -> Self;

    /// Tolerance for derived quantities that accumulate a few roundings.
    fn loose_tol() -> Self;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f64 {
    fn strict_tol() -> Self {
        1e-12
    }

    fn loose_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn strict_tol() -> Self {
        1e-5
    }

    fn loose_tol() -> Self {
        1e-4
    }
}

/// Complex amplitude over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn cis<T: Real>(phase: T) -> Cplx<T> {
    Complex::new(phase.cos(), phase.sin())
}
