use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + rustfft::FftNum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot hold it,
    /// which never happens for f32/f64.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("integer not representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub(crate) fn im<T: Real>(y: T) -> Complex<T> {
    Complex::new(T::zero(), y)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Cube root on the principal branch.
pub(crate) fn cbrt_principal<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let (r, theta) = z.to_polar();
    Complex::from_polar(r.cbrt(), theta / T::lit(3.0))
}
