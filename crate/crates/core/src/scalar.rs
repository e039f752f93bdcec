//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + FftNum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + FftNum
        + Default
        + Debug
        + Display
        + LowerExp
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable")
}

#[inline]
pub fn from_i64<T: Real>(n: i64) -> T {
    T::from_i64(n).expect("integer representable")
}

/// `2^e` for integer `e`.
#[inline]
pub fn pow2<T: Real>(e: i32) -> T {
    T::from_f64(2f64.powi(e)).unwrap_or_else(|| lit::<T>(2.0).powi(e))
}

/// `2^(j/2)`; exact for even `j`, one rounding of `sqrt(2)` otherwise.
pub fn pow2_half<T: Real>(j: i32) -> T {
    if j % 2 == 0 {
        pow2(j / 2)
    } else if j > 0 {
        T::SQRT_2() * pow2((j - 1) / 2)
    } else {
        T::FRAC_1_SQRT_2() * pow2((j + 1) / 2)
    }
}

/// `exp(-2*pi*i * num/den)` with the angle reduced exactly before rounding.
pub fn unit_root<T: Real>(num: i128, den: i128) -> Complex<T> {
    debug_assert!(den > 0);
    let r = num.rem_euclid(den);
    let theta = -T::TAU() * (T::from_i128(r).unwrap() / T::from_i128(den).unwrap());
    Complex::from_polar(T::one(), theta)
}

/// `exp(i*theta)`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::from_polar(T::one(), theta)
}

/// Maximum of an iterator of non-negative reals, `0` when empty.
pub fn max_of<T: Real, I: IntoIterator<Item = T>>(it: I) -> T {
    it.into_iter().fold(T::zero(), |a, b| if b > a || b.is_nan() { b } else { a })
}

/// Formats a value with 17 significant digits.
pub fn sig17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64().unwrap_or(f64::NAN))
}
