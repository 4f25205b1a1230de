//! Scalar abstraction shared by every numerical module.
//!
//! All grid, quadrature and solver code is written against [`Real`], which is
//! implemented for `f32` and `f64`. The acceptance tolerances assume `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Floating point type usable by the numerical core.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + NumAssign
    + Debug
    + Display
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or index into this type.
    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Squared modulus.
#[inline]
pub fn abs2<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// `(sum |v_i|^2)^{1/2}` for a complex slice.
pub fn l2_sum<T: Real>(values: &[Complex<T>]) -> T {
    values.iter().map(|z| abs2(*z)).sum::<T>().sqrt()
}

/// Principal branch of `z^p` for real `p`.
#[inline]
pub fn cpow<T: Real>(z: Complex<T>, p: T) -> Complex<T> {
    if z.re == T::zero() && z.im == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let (r, theta) = z.to_polar();
    Complex::from_polar(r.powf(p), theta * p)
}

/// Nearest floating point value of an exact rational.
#[inline]
pub fn from_ratio<T: Real>(r: num_rational::Ratio<i64>) -> T {
    T::lit(*r.numer() as f64 / *r.denom() as f64)
}
