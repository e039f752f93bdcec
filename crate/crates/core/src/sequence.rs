//! Finitely supported sequences: convolution, DTFT, z-transform, and the
//! conjugate-quadrature-filter toolbox.

use std::ops::RangeInclusive;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{max_of, unit_root, Real};

/// `x_n` for `n` in `offset .. offset + coeffs.len()`, zero elsewhere.
///
/// Always stored in canonical form: no leading or trailing exact zeros,
/// and the zero sequence has offset 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSequence<T> {
    offset: i64,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FilterSequence<T> {
    pub fn new(offset: i64, coeffs: Vec<Complex<T>>) -> Self {
        let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
            return Self::zero();
        };
        let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        FilterSequence {
            offset: offset + first as i64,
            coeffs: coeffs[first..=last].to_vec(),
        }
    }

    pub fn from_real(offset: i64, coeffs: &[T]) -> Self {
        Self::new(offset, coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    pub fn zero() -> Self {
        FilterSequence {
            offset: 0,
            coeffs: Vec::new(),
        }
    }

    /// Kronecker delta at `n`.
    pub fn delta(n: i64) -> Self {
        FilterSequence {
            offset: n,
            coeffs: vec![Complex::new(T::one(), T::zero())],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// One past the last index of the support.
    pub fn end(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    pub fn get(&self, n: i64) -> Complex<T> {
        let k = n - self.offset;
        if k < 0 || k >= self.coeffs.len() as i64 {
            Complex::zero()
        } else {
            self.coeffs[k as usize]
        }
    }

    /// `(n, x_n)` over the stored support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.coeffs.iter().enumerate().map(move |(k, c)| (self.offset + k as i64, *c))
    }

    pub fn scale(&self, alpha: Complex<T>) -> Self {
        Self::new(self.offset, self.coeffs.iter().map(|c| c * alpha).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        max_of((lo..hi).map(|n| (self.get(n) - other.get(n)).norm()))
    }
}

/// Samples of a 2 pi periodic function at `omega_m = 2 pi m / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSamples<T> {
    values: Vec<Complex<T>>,
}

impl<T: Real> SpectrumSamples<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        check_points(values.len())?;
        Ok(SpectrumSamples { values })
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn omega(&self, m: usize) -> T {
        T::TAU() * T::from_usize(m).unwrap() / T::from_usize(self.points()).unwrap()
    }

    /// Value at `omega_m + pi`.
    pub fn shifted_by_pi(&self, m: usize) -> Complex<T> {
        let n = self.points();
        self.values[(m + n / 2) % n]
    }

    /// Value at `2 omega_m`.
    pub fn doubled(&self, m: usize) -> Complex<T> {
        self.values[(2 * m) % self.points()]
    }

    pub fn min_re(&self) -> T {
        self.values.iter().map(|v| v.re).fold(T::infinity(), T::min)
    }

    pub fn max_re(&self) -> T {
        self.values.iter().map(|v| v.re).fold(T::neg_infinity(), T::max)
    }

    pub fn max_abs_im(&self) -> T {
        max_of(self.values.iter().map(|v| v.im.abs()))
    }
}

pub(crate) fn check_points(m: usize) -> Result<()> {
    if m < 2 || m % 2 != 0 {
        Err(Error::BadGrid(m))
    } else {
        Ok(())
    }
}

/// `(x * y)_n = sum_m x_m y_(n-m)`.
pub fn convolve<T: Real>(x: &FilterSequence<T>, y: &FilterSequence<T>) -> FilterSequence<T> {
    if x.is_empty() || y.is_empty() {
        return FilterSequence::zero();
    }
    let mut out = vec![Complex::zero(); x.len() + y.len() - 1];
    for (i, a) in x.coeffs.iter().enumerate() {
        for (j, b) in y.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    FilterSequence::new(x.offset + y.offset, out)
}

/// `X(omega_m) = sum_n x_n exp(-i omega_m n)` on `M` points.
pub fn dtft<T: Real>(x: &FilterSequence<T>, points: usize) -> Result<SpectrumSamples<T>> {
    check_points(points)?;
    let m_ = points as i128;
    let values = (0..m_)
        .map(|m| {
            x.iter()
                .map(|(n, c)| c * unit_root::<T>(m * n as i128, m_))
                .fold(Complex::zero(), |a, b| a + b)
        })
        .collect();
    Ok(SpectrumSamples { values })
}

/// `X(omega)` at an arbitrary real frequency.
pub fn dtft_at<T: Real>(x: &FilterSequence<T>, omega: T) -> Complex<T> {
    x.iter()
        .map(|(n, c)| c * Complex::from_polar(T::one(), -omega * T::from_i64(n).unwrap()))
        .fold(Complex::zero(), |a, b| a + b)
}

/// `x_n = (1/M) sum_m X(omega_m) exp(i omega_m n)` for `n` in `range`.
pub fn idtft<T: Real>(spec: &SpectrumSamples<T>, range: RangeInclusive<i64>) -> Result<FilterSequence<T>> {
    let m_ = spec.points();
    let (lo, hi) = (*range.start(), *range.end());
    if hi < lo {
        return Ok(FilterSequence::zero());
    }
    let span = (hi - lo + 1) as usize;
    if m_ < span {
        return Err(Error::GridTooCoarse { points: m_, span });
    }
    let inv = T::one() / T::from_usize(m_).unwrap();
    let coeffs = (lo..=hi)
        .map(|n| {
            spec.values
                .iter()
                .enumerate()
                .map(|(m, v)| v * unit_root::<T>(-(m as i128) * n as i128, m_ as i128))
                .fold(Complex::zero(), |a, b| a + b)
                * inv
        })
        .collect();
    Ok(FilterSequence::new(lo, coeffs))
}

/// `sum_n x_n z^-n`.
pub fn ztransform_eval<T: Real>(x: &FilterSequence<T>, z: Complex<T>) -> Result<Complex<T>> {
    if z.is_zero() {
        if x.iter().any(|(n, c)| n > 0 && !c.is_zero()) {
            return Err(Error::ZeroArgument);
        }
        return Ok(x.get(0));
    }
    Ok(x.iter().map(|(n, c)| c * z.powi(-(n as i32))).fold(Complex::zero(), |a, b| a + b))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sums<T> {
    pub total: Complex<T>,
    pub alternating: Complex<T>,
    pub even: Complex<T>,
    pub odd: Complex<T>,
}

pub fn sums<T: Real>(x: &FilterSequence<T>) -> Sums<T> {
    let mut even = Complex::zero();
    let mut odd = Complex::zero();
    for (n, c) in x.iter() {
        if n.rem_euclid(2) == 0 {
            even += c;
        } else {
            odd += c;
        }
    }
    Sums {
        total: even + odd,
        alternating: even - odd,
        even,
        odd,
    }
}

/// `g_n = sign (-1)^n conj(h_(shift - n))`.
pub fn cqf<T: Real>(h: &FilterSequence<T>, shift: i64, sign: i32) -> FilterSequence<T> {
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    if h.is_empty() {
        return FilterSequence::zero();
    }
    let lo = shift - (h.end() - 1);
    let coeffs = (lo..=shift - h.offset())
        .map(|n| {
            let c = h.get(shift - n).conj();
            if (n.rem_euclid(2) == 0) == (sign == 1) {
                c
            } else {
                -c
            }
        })
        .collect();
    FilterSequence::new(lo, coeffs)
}

/// `c_n = sum_m x_m conj(y_(m-2n))` over every `n` with overlap.
pub fn decimated_correlation<T: Real>(x: &FilterSequence<T>, y: &FilterSequence<T>) -> FilterSequence<T> {
    if x.is_empty() || y.is_empty() {
        return FilterSequence::zero();
    }
    // m - 2n in [y.offset, y.end) with m in [x.offset, x.end)
    let n_lo = (x.offset() - (y.end() - 1)).div_euclid(2);
    let n_hi = (x.end() - 1 - y.offset()).div_euclid(2) + 1;
    let coeffs = (n_lo..=n_hi)
        .map(|n| {
            x.iter()
                .map(|(m, a)| a * y.get(m - 2 * n).conj())
                .fold(Complex::zero(), |s, t| s + t)
        })
        .collect();
    FilterSequence::new(n_lo, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResidual<T> {
    pub time_residual: T,
    pub freq_residual: T,
}

impl<T: Real> QuadratureResidual<T> {
    pub fn max(&self) -> T {
        self.time_residual.max(self.freq_residual)
    }
}

/// Residuals of `sum_m x_m conj(x_(m-2n)) = delta_n` and
/// `|X(w)|^2 + |X(w + pi)|^2 = 2`.
pub fn check_orthonormal_quadrature<T: Real>(x: &FilterSequence<T>, points: usize) -> Result<QuadratureResidual<T>> {
    let spec = dtft(x, points)?;
    let c = decimated_correlation(x, x);
    let one = Complex::new(T::one(), T::zero());
    let time = if c.is_empty() {
        T::one()
    } else {
        let lo = c.offset().min(0);
        let hi = c.end().max(1);
        max_of((lo..hi).map(|n| (c.get(n) - if n == 0 { one } else { Complex::zero() }).norm()))
    };
    let two = T::one() + T::one();
    let freq = max_of(
        (0..points).map(|m| (spec.values[m].norm_sqr() + spec.shifted_by_pi(m).norm_sqr() - two).abs()),
    );
    Ok(QuadratureResidual {
        time_residual: time,
        freq_residual: freq,
    })
}

/// Residuals of `sum_m x_m conj(y_(m-2n)) = 0` and
/// `X conj(Y) + X(w + pi) conj(Y(w + pi)) = 0`.
pub fn check_cross_quadrature<T: Real>(
    x: &FilterSequence<T>,
    y: &FilterSequence<T>,
    points: usize,
) -> Result<QuadratureResidual<T>> {
    let xs = dtft(x, points)?;
    let ys = dtft(y, points)?;
    let c = decimated_correlation(x, y);
    let time = max_of(c.coeffs().iter().map(|v| v.norm()));
    let freq = max_of(
        (0..points).map(|m| (xs.values[m] * ys.values[m].conj() + xs.shifted_by_pi(m) * ys.shifted_by_pi(m).conj()).norm()),
    );
    Ok(QuadratureResidual {
        time_residual: time,
        freq_residual: freq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    type S = FilterSequence<f64>;

    fn r(offset: i64, c: &[f64]) -> S {
        S::from_real(offset, c)
    }

    #[test]
    fn canonical_form() {
        let x = r(-2, &[0.0, 1.0, 2.0, 0.0]);
        assert_eq!(x.offset(), -1);
        assert_eq!(x.len(), 2);
        assert_eq!(r(5, &[0.0, 0.0]), S::zero());
        assert_eq!(S::zero().offset(), 0);
    }

    #[test]
    fn convolution_examples() {
        let x = r(3, &[1.0, -2.0, 0.5]);
        assert_eq!(convolve(&S::delta(0), &x), x);
        assert_eq!(convolve(&r(0, &[1.0, 1.0]), &r(0, &[1.0, 1.0])), r(0, &[1.0, 2.0, 1.0]));
        assert_eq!(convolve(&S::zero(), &x), S::zero());
    }

    #[test]
    fn dtft_examples() {
        let d = dtft(&S::delta(0), 8).unwrap();
        assert!(d.values().iter().all(|v| *v == Complex::new(1.0, 0.0)));
        let d1 = dtft(&S::delta(1), 8).unwrap();
        for m in 0..8 {
            let w = d1.omega(m);
            assert!((d1.values()[m] - Complex::from_polar(1.0, -w)).norm() < 1e-15);
        }
        assert_eq!(dtft(&S::delta(0), 7), Err(Error::BadGrid(7)));
        assert_eq!(dtft(&S::delta(0), 0), Err(Error::BadGrid(0)));
    }

    #[test]
    fn idtft_examples() {
        let one = SpectrumSamples::new(vec![Complex::new(1.0, 0.0); 16]).unwrap();
        let d = idtft(&one, -3..=3).unwrap();
        assert!(d.max_abs_diff(&S::delta(0)) < 1e-15);
        let e = dtft(&S::delta(1), 16).unwrap();
        assert!(idtft(&e, -3..=3).unwrap().max_abs_diff(&S::delta(1)) < 1e-15);
        assert_eq!(idtft(&one, 0..=16), Err(Error::GridTooCoarse { points: 16, span: 17 }));
    }

    #[test]
    fn ztransform_examples() {
        let x = r(-1, &[1.0, 2.0, -3.0, 0.25]);
        let s = sums(&x);
        assert!((ztransform_eval(&x, Complex::new(1.0, 0.0)).unwrap() - s.total).norm() < 1e-15);
        assert!((ztransform_eval(&x, Complex::new(-1.0, 0.0)).unwrap() - s.alternating).norm() < 1e-15);
        assert_eq!(ztransform_eval(&S::delta(0), Complex::new(0.3, 2.0)).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(ztransform_eval(&x, Complex::zero()), Err(Error::ZeroArgument));
    }

    #[test]
    fn sums_examples() {
        let s = sums(&fixtures::haar_filter::<f64>());
        assert!((s.total.re - SQRT_2).abs() < 1e-15);
        assert!(s.alternating.norm() < 1e-15);
        assert!((s.even.re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.odd.re - FRAC_1_SQRT_2).abs() < 1e-15);
        let s = sums(&fixtures::degenerate_filter::<f64>());
        assert_eq!(s.total.re, SQRT_2);
        assert_eq!(s.alternating.re, -SQRT_2);
        let z = sums(&S::zero());
        assert_eq!(z.total, Complex::zero());
        assert_eq!(z.odd, Complex::zero());
    }

    #[test]
    fn cqf_examples() {
        let h = fixtures::haar_filter::<f64>();
        let g = cqf(&h, 1, 1);
        assert_eq!(g, r(0, &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]));
        assert_eq!(cqf(&S::delta(0), 0, 1), S::delta(0));
        // applying twice with sign * (-1)^N returns h
        let x = S::new(2, vec![Complex::new(1.0, 0.5), Complex::new(-0.25, 2.0), Complex::new(3.0, 0.0)]);
        for n in [-2i64, 0, 3, 5] {
            for sign in [1, -1] {
                let back_sign = if n % 2 == 0 { sign } else { -sign };
                assert_eq!(cqf(&cqf(&x, n, sign), n, back_sign), x, "N={n} sign={sign}");
            }
        }
    }

    #[test]
    fn cqf_frequency_identity() {
        let h = fixtures::daubechies4::<f64>();
        for (n, sign) in [(3i64, 1), (3, -1), (1, 1), (4, -1)] {
            let g = cqf(&h, n, sign);
            let gs = dtft(&g, 64).unwrap();
            for m in 0..64 {
                let w = gs.omega(m);
                let pm = if n % 2 == 0 { 1.0 } else { -1.0 } * sign as f64;
                let want = Complex::from_polar(pm, -w * n as f64) * dtft_at(&h, w + std::f64::consts::PI).conj();
                assert!((gs.values()[m] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orthonormal_quadrature_examples() {
        let q = check_orthonormal_quadrature(&fixtures::haar_filter::<f64>(), 1024).unwrap();
        assert!(q.time_residual <= 1e-12 && q.freq_residual <= 1e-12);
        let q = check_orthonormal_quadrature(&S::from_real(0, &[SQRT_2]), 64).unwrap();
        assert!((q.time_residual - 1.0).abs() < 1e-15);
        assert!((q.freq_residual - 2.0).abs() < 1e-15);
        let q = check_orthonormal_quadrature(&fixtures::daubechies4::<f64>(), 256).unwrap();
        assert!(q.max() < 1e-14);
        assert_eq!(check_orthonormal_quadrature(&S::delta(0), 3), Err(Error::BadGrid(3)));
    }

    #[test]
    fn cross_quadrature_examples() {
        let h = fixtures::haar_filter::<f64>();
        let g = cqf(&h, 1, 1);
        let q = check_cross_quadrature(&h, &g, 1024).unwrap();
        assert!(q.max() <= 1e-12);
        let q = check_cross_quadrature(&h, &h, 64).unwrap();
        assert!((q.freq_residual - 2.0).abs() < 1e-14);
        let q = check_cross_quadrature(&h, &S::zero(), 64).unwrap();
        assert_eq!((q.time_residual, q.freq_residual), (0.0, 0.0));
    }
}
