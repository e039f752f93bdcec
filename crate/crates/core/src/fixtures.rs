//! Closed-form test functions and filters.
//!
//! Every function fixture evaluates its formula exactly at the grid
//! midpoints; nothing is averaged or interpolated.

use num_complex::Complex;

use crate::grid::{Dyadic, DyadicGrid};
use crate::scalar::{lit, Real};
use crate::sequence::FilterSequence;
use crate::signal::SampledFunction;

fn grid_on(resolution: i32, lo: Dyadic, hi: Dyadic) -> DyadicGrid {
    DyadicGrid::covering(resolution, lo, hi).expect("fixture support must lie on the lattice")
}

/// `1_[0,1)`.
pub fn pulse<T: Real>(resolution: i32) -> SampledFunction<T> {
    let g = grid_on(resolution, Dyadic::ZERO, Dyadic::from_int(1));
    SampledFunction::from_real_fn(g, |_| T::one())
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Cardinal B-spline of order `m` (the `m`-fold self-convolution of the
/// pulse), supported on `[0, m)`.
pub fn bspline<T: Real>(resolution: i32, m: u32) -> SampledFunction<T> {
    assert!(m >= 1, "B-spline order starts at 1");
    let g = grid_on(resolution, Dyadic::ZERO, Dyadic::from_int(m as i64));
    let fact: f64 = (1..m).map(f64::from).product();
    SampledFunction::from_real_fn(g, |x: T| {
        let mut acc = T::zero();
        for k in 0..=m {
            let t = x - T::from_u32(k).unwrap();
            if t > T::zero() {
                let term = lit::<T>(binomial(m, k)) * t.powi(m as i32 - 1);
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
        }
        acc / lit(fact)
    })
}

/// Order-2 B-spline: the triangle on `[0, 2]` with peak 1 at `x = 1`.
pub fn hat<T: Real>(resolution: i32) -> SampledFunction<T> {
    let g = grid_on(resolution, Dyadic::ZERO, Dyadic::from_int(2));
    SampledFunction::from_real_fn(g, |x: T| T::one() - (x - T::one()).abs())
}

/// `cos^2(pi x / 2)` on `[-1, 1)`.
pub fn cos2_bump<T: Real>(resolution: i32) -> SampledFunction<T> {
    let g = grid_on(resolution, Dyadic::from_int(-1), Dyadic::from_int(1));
    SampledFunction::from_real_fn(g, |x: T| {
        let c = (T::FRAC_PI_2() * x).cos();
        c * c
    })
}

/// Raised cosine with roll-off `beta` in `[0, 1]`, stored on `[-1, 1)`.
pub fn raised_cosine<T: Real>(resolution: i32, beta: T) -> SampledFunction<T> {
    assert!(beta >= T::zero() && beta <= T::one(), "roll-off must lie in [0, 1]");
    let g = grid_on(resolution, Dyadic::from_int(-1), Dyadic::from_int(1));
    let half = lit::<T>(0.5);
    let flat = (T::one() - beta) * half;
    let edge = (T::one() + beta) * half;
    SampledFunction::from_real_fn(g, |x: T| {
        let a = x.abs();
        if a < flat {
            T::one()
        } else if a < edge {
            half * (T::one() + (T::PI() / beta * (a - flat)).cos())
        } else {
            T::zero()
        }
    })
}

/// `sin(pi x)` on `[lo, hi)`.
pub fn sine<T: Real>(resolution: i32, lo: Dyadic, hi: Dyadic) -> SampledFunction<T> {
    let g = grid_on(resolution, lo, hi);
    SampledFunction::from_real_fn(g, |x: T| (T::PI() * x).sin())
}

/// `exp(-pi x^2)` truncated to `[-half_width, half_width)`.
pub fn gaussian<T: Real>(resolution: i32, half_width: i64) -> SampledFunction<T> {
    let g = grid_on(resolution, Dyadic::from_int(-half_width), Dyadic::from_int(half_width));
    SampledFunction::from_real_fn(g, |x: T| (-T::PI() * x * x).exp())
}

fn real_filter<T: Real>(offset: i64, coeffs: &[f64]) -> FilterSequence<T> {
    FilterSequence::new(offset, coeffs.iter().map(|&c| Complex::new(lit(c), T::zero())).collect())
}

pub fn haar_filter<T: Real>() -> FilterSequence<T> {
    let s = T::FRAC_1_SQRT_2();
    FilterSequence::new(0, vec![Complex::new(s, T::zero()); 2])
}

/// `(sqrt2/4, sqrt2/2, sqrt2/4)`, the scaling filter of the hat.
pub fn hat_filter<T: Real>() -> FilterSequence<T> {
    bspline_filter(2)
}

/// `sqrt2 * delta_1`: admissible, but its dilation equation has only the
/// zero solution in L2.
pub fn degenerate_filter<T: Real>() -> FilterSequence<T> {
    FilterSequence::new(1, vec![Complex::new(T::SQRT_2(), T::zero())])
}

/// Scaling filter of the order-`m` B-spline: `sqrt2 2^-m C(m, k)`.
pub fn bspline_filter<T: Real>(m: u32) -> FilterSequence<T> {
    if m == 1 {
        return haar_filter();
    }
    let scale = std::f64::consts::SQRT_2 * 2f64.powi(-(m as i32));
    let c: Vec<f64> = (0..=m).map(|k| scale * binomial(m, k)).collect();
    real_filter(0, &c)
}

/// Four-tap Daubechies filter.
pub fn daubechies4<T: Real>() -> FilterSequence<T> {
    let s3 = 3f64.sqrt();
    let d = 4.0 * std::f64::consts::SQRT_2;
    real_filter(0, &[(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d])
}
