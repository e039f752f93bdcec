//! Fourier transforms, correlations, power spectra and Poisson summation.
//!
//! The Fourier transform is the unitary one,
//! `F(w) = (2 pi)^-1/2 integral f(x) exp(-i w x) dx`, discretized by the
//! midpoint rule on the function's own grid.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::Dyadic;
use crate::scalar::{cis, lit, max_of, pow2, Real};
use crate::sequence::{check_points, dtft, idtft, FilterSequence, SpectrumSamples};
use crate::signal::SampledFunction;

/// Values of a Fourier transform on a list of real frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSamples<T> {
    omegas: Vec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> FourierSamples<T> {
    pub fn new(omegas: Vec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(Error::InvalidData(format!(
                "{} frequencies but {} values",
                omegas.len(),
                values.len()
            )));
        }
        Ok(FourierSamples { omegas, values })
    }

    pub fn omegas(&self) -> &[T] {
        &self.omegas
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Spacing of a uniform grid, `None` when the grid is not uniform.
    pub fn step(&self) -> Option<T> {
        if self.omegas.len() < 2 {
            return None;
        }
        let d = self.omegas[1] - self.omegas[0];
        let tol = lit::<T>(1e-9) * d.abs().max(T::one());
        self.omegas
            .windows(2)
            .all(|w| ((w[1] - w[0]) - d).abs() <= tol)
            .then_some(d)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        max_of(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()))
    }
}

/// `count` frequencies `-omega_max + m (2 omega_max / count)`.
pub fn uniform_omegas<T: Real>(omega_max: T, count: usize) -> Vec<T> {
    let step = (omega_max + omega_max) / T::from_usize(count.max(1)).unwrap();
    (0..count).map(|m| -omega_max + step * T::from_usize(m).unwrap()).collect()
}

fn inv_sqrt_tau<T: Real>() -> T {
    T::one() / T::TAU().sqrt()
}

/// Fourier transform at a single frequency.
pub fn fourier_at<T: Real>(f: &SampledFunction<T>, omega: T) -> Complex<T> {
    let g = f.grid();
    let acc = f
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| v * cis(-omega * g.x::<T>(k)))
        .fold(Complex::zero(), |a, b| a + b);
    acc * (f.spacing() * inv_sqrt_tau())
}

pub fn fourier_transform<T: Real>(f: &SampledFunction<T>, omegas: &[T]) -> FourierSamples<T> {
    let values = omegas.par_iter().map(|&w| fourier_at(f, w)).collect();
    FourierSamples {
        omegas: omegas.to_vec(),
        values,
    }
}

/// Riemann sum of `(2 pi)^-1/2 integral F(w) exp(i w x) dw` on `grid`.
///
/// The result is only meaningful when `|F|` is negligible outside the
/// sampled band and the step is fine enough that `2 pi / step` exceeds the
/// support length of the original function.
pub fn inverse_fourier<T: Real>(spec: &FourierSamples<T>, grid: crate::grid::DyadicGrid) -> Result<SampledFunction<T>> {
    if spec.is_empty() {
        return Ok(SampledFunction::from_fn(grid, |_| Complex::zero()));
    }
    let step = spec
        .step()
        .ok_or_else(|| Error::InvalidData("inverse transform needs a uniform frequency grid".into()))?;
    let w = step * inv_sqrt_tau();
    let values: Vec<Complex<T>> = (0..grid.count())
        .into_par_iter()
        .map(|k| {
            let x = grid.x::<T>(k);
            spec.omegas
                .iter()
                .zip(&spec.values)
                .map(|(&om, v)| v * cis(om * x))
                .fold(Complex::zero(), |a, b| a + b)
                * w
        })
        .collect();
    SampledFunction::new(grid, values)
}

/// `R_fg(n) = <f | T^n g>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSequence<T>(pub FilterSequence<T>);

impl<T: Real> CorrelationSequence<T> {
    pub fn get(&self, n: i64) -> Complex<T> {
        self.0.get(n)
    }

    pub fn as_sequence(&self) -> &FilterSequence<T> {
        &self.0
    }
}

fn integer_shift_cells(n: i64, resolution: i32) -> Result<i64> {
    Dyadic::from_int(n)
        .times_pow2_integer(resolution)
        .map(|c| c as i64)
        .ok_or_else(|| Error::NotRepresentable(n.to_string(), resolution))
}

pub fn autocorrelation<T: Real>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    n_max: usize,
) -> Result<CorrelationSequence<T>> {
    if f.resolution() != g.resolution() {
        return Err(Error::ResolutionMismatch(f.resolution(), g.resolution()));
    }
    let n_max = n_max as i64;
    let coeffs = (-n_max..=n_max)
        .map(|n| Ok(f.inner_product_shifted(g, integer_shift_cells(n, f.resolution())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationSequence(FilterSequence::new(-n_max, coeffs)))
}

/// `S_fg(w) = sum_n R_fg(n) exp(-i w n)`.
pub fn power_spectrum_time<T: Real>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    n_max: usize,
    points: usize,
) -> Result<SpectrumSamples<T>> {
    check_points(points)?;
    dtft(autocorrelation(f, g, n_max)?.as_sequence(), points)
}

const FFT_LIMIT: usize = 1 << 22;
const FALLBACK_TRUNC: i64 = 64;

/// `S_fg(w) = 2 pi sum_n F(w + 2 pi n) conj(G(w + 2 pi n))`.
///
/// The sampled transform at resolution `J` is `2 pi 2^J` (anti)periodic,
/// so the sum is taken over at most one alias period of `2^J` terms. With
/// `n_trunc = None` that full period is used, which is exact for the
/// sampled functions. Large grids whose full period would need more than
/// `2^22` transform points fall back to direct evaluation with
/// `|n| <= 64`.
pub fn power_spectrum_freq<T: Real>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    points: usize,
    n_trunc: Option<usize>,
) -> Result<SpectrumSamples<T>> {
    check_points(points)?;
    let j = f.resolution();
    if j != g.resolution() {
        return Err(Error::ResolutionMismatch(j, g.resolution()));
    }
    if j < 0 {
        return Err(Error::InvalidData("periodization route needs resolution >= 0".into()));
    }
    if f.is_empty() || g.is_empty() {
        return SpectrumSamples::new(vec![Complex::zero(); points]);
    }
    let period = 1i64 << j;
    let (lo, hi) = match n_trunc {
        Some(n) if 2 * (n as i64) + 1 < period => (-(n as i64), n as i64),
        _ => (-(period / 2), period - period / 2 - 1),
    };
    let q = points.checked_mul(period as usize).filter(|&q| q <= FFT_LIMIT);
    match q {
        Some(q) => Ok(periodized_by_fft(f, g, points, q, lo, hi)),
        None => {
            let (lo, hi) = if n_trunc.is_none() {
                (-FALLBACK_TRUNC, FALLBACK_TRUNC)
            } else {
                (lo, hi)
            };
            Ok(periodized_direct(f, g, points, lo, hi))
        }
    }
}

fn folded_spectrum<T: Real>(f: &SampledFunction<T>, q: usize, planner: &mut FftPlanner<T>) -> Vec<Complex<T>> {
    let mut buf = vec![Complex::zero(); q];
    let start = f.grid().start();
    for (k, v) in f.values().iter().enumerate() {
        buf[(start + k as i64).rem_euclid(q as i64) as usize] += v;
    }
    planner.plan_fft_forward(q).process(&mut buf);
    buf
}

fn periodized_by_fft<T: Real>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    points: usize,
    q: usize,
    lo: i64,
    hi: i64,
) -> SpectrumSamples<T> {
    // F(2 pi q / M) = h (2 pi)^-1/2 exp(-i pi q / Q) FFT_Q[fold f](q); the
    // phase cancels in F conj(G).
    let mut planner = FftPlanner::new();
    let fs = folded_spectrum(f, q, &mut planner);
    let gs = if std::ptr::eq(f, g) {
        fs.clone()
    } else {
        folded_spectrum(g, q, &mut planner)
    };
    let h = f.spacing();
    let w = h * h;
    let values = (0..points as i64)
        .map(|m| {
            (lo..=hi)
                .map(|n| {
                    let idx = (m + n * points as i64).rem_euclid(q as i64) as usize;
                    fs[idx] * gs[idx].conj()
                })
                .fold(Complex::zero(), |a, b| a + b)
                * w
        })
        .collect();
    SpectrumSamples::new(values).expect("point count already validated")
}

fn periodized_direct<T: Real>(
    f: &SampledFunction<T>,
    g: &SampledFunction<T>,
    points: usize,
    lo: i64,
    hi: i64,
) -> SpectrumSamples<T> {
    let values = (0..points)
        .into_par_iter()
        .map(|m| {
            let base = T::TAU() * T::from_usize(m).unwrap() / T::from_usize(points).unwrap();
            (lo..=hi)
                .map(|n| {
                    let w = base + T::TAU() * T::from_i64(n).unwrap();
                    fourier_at(f, w) * fourier_at(g, w).conj()
                })
                .fold(Complex::zero(), |a, b| a + b)
                * T::TAU()
        })
        .collect();
    SpectrumSamples::new(values).expect("point count already validated")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszBounds<T> {
    pub a: T,
    pub b: T,
}

/// Imaginary-part tolerance above which an auto power spectrum is rejected.
pub const NON_REAL_THRESHOLD: f64 = 1e-8;

/// Extremes of the auto power spectrum over the frequency grid.
pub fn riesz_bounds<T: Real>(f: &SampledFunction<T>, n_max: usize, points: usize) -> Result<RieszBounds<T>> {
    let s = power_spectrum_time(f, f, n_max, points)?;
    bounds_of(&s)
}

pub(crate) fn bounds_of<T: Real>(s: &SpectrumSamples<T>) -> Result<RieszBounds<T>> {
    let im = s.max_abs_im();
    if im > lit(NON_REAL_THRESHOLD) {
        return Err(Error::NonRealSpectrum(im.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(RieszBounds {
        a: s.min_re(),
        b: s.max_re(),
    })
}

/// `max(max_n |R(n) - delta_n|, max_w |S(w) - 1|)`.
pub fn check_orthonormal_shifts<T: Real>(f: &SampledFunction<T>, n_max: usize, points: usize) -> Result<T> {
    let r = autocorrelation(f, f, n_max)?;
    let one = Complex::new(T::one(), T::zero());
    let n_max = n_max as i64;
    let time = max_of((-n_max..=n_max).map(|n| (r.get(n) - if n == 0 { one } else { Complex::zero() }).norm()));
    let s = dtft(r.as_sequence(), points)?;
    let freq = max_of(s.values().iter().map(|v| (v - one).norm()));
    Ok(time.max(freq))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BattleLemarieParams {
    /// Correlation range used for the power spectrum.
    pub n_max: usize,
    /// Frequency points for the spectrum and its inverse.
    pub points: usize,
    /// Half-length of the orthogonalizing sequence.
    pub n_trunc: usize,
}

impl Default for BattleLemarieParams {
    fn default() -> Self {
        BattleLemarieParams {
            n_max: 16,
            points: 1024,
            n_trunc: 32,
        }
    }
}

/// Lower spectrum bound at or below which orthogonalization is refused.
pub const DEGENERATE_THRESHOLD: f64 = 1e-8;

/// Orthogonalizes the integer shifts of `f` by `F_new = F / sqrt(S_ff)`.
///
/// `1/sqrt(S_ff)` is 2 pi periodic, so it is applied as the sequence of its
/// Fourier coefficients `c_k`: `f_new = sum_|k|<=n_trunc c_k T^k f`.
pub fn battle_lemarie<T: Real>(f: &SampledFunction<T>, params: BattleLemarieParams) -> Result<SampledFunction<T>> {
    let s = power_spectrum_time(f, f, params.n_max, params.points)?;
    let RieszBounds { a, .. } = bounds_of(&s)?;
    if !(a > lit(DEGENERATE_THRESHOLD)) {
        return Err(Error::DegenerateSpectrum(a.to_f64().unwrap_or(f64::NAN)));
    }
    let inv_sqrt: Vec<Complex<T>> = s
        .values()
        .iter()
        .map(|v| Complex::new(T::one() / v.re.sqrt(), T::zero()))
        .collect();
    let n = params.n_trunc as i64;
    let c = idtft(&SpectrumSamples::new(inv_sqrt)?, -n..=n)?;
    let mut out = SampledFunction::zero(f.resolution());
    for (k, ck) in c.iter() {
        let shifted = f.translate_dyadic(Dyadic::from_int(k))?;
        out.axpy(ck, &shifted);
    }
    Ok(out)
}

/// `max_x |sum_n f(x + n tau) - (sqrt(2 pi)/tau) sum_n F(2 pi n / tau) exp(i 2 pi n x / tau)|`
/// with both sums over `|n| <= n_trunc`.
pub fn psf_residual<T: Real>(f: &SampledFunction<T>, tau: T, probes: &[T], n_trunc: usize) -> T {
    let n = n_trunc as i64;
    let freqs: Vec<T> = (-n..=n).map(|k| T::TAU() * T::from_i64(k).unwrap() / tau).collect();
    let ft = fourier_transform(f, &freqs);
    let scale = T::TAU().sqrt() / tau;
    max_of(probes.iter().map(|&x| {
        let left: Complex<T> = (-n..=n)
            .map(|k| f.eval(x + T::from_i64(k).unwrap() * tau))
            .fold(Complex::zero(), |a, b| a + b);
        let right = freqs
            .iter()
            .zip(ft.values())
            .map(|(&w, v)| v * cis(w * x))
            .fold(Complex::zero(), |a, b| a + b)
            * scale;
        (left - right).norm()
    }))
}

/// `max_w |sum_n F(w - 2 pi n / tau) - (tau / sqrt(2 pi)) sum_n f(n tau) exp(-i w n tau)|`
/// with both sums over `|n| <= n_trunc`.
pub fn ipsf_residual<T: Real>(f: &SampledFunction<T>, tau: T, probes: &[T], n_trunc: usize) -> T {
    let n = n_trunc as i64;
    let samples: Vec<(T, Complex<T>)> = (-n..=n)
        .map(|k| {
            let t = T::from_i64(k).unwrap() * tau;
            (t, f.eval(t))
        })
        .collect();
    let scale = tau * inv_sqrt_tau();
    max_of(probes.iter().map(|&w| {
        let freqs: Vec<T> = (-n..=n).map(|k| w - T::TAU() * T::from_i64(k).unwrap() / tau).collect();
        let left: Complex<T> = fourier_transform(f, &freqs)
            .values()
            .iter()
            .fold(Complex::zero(), |a, b| a + b);
        let right = samples
            .iter()
            .map(|(t, v)| v * cis(-w * *t))
            .fold(Complex::zero(), |a, b| a + b)
            * scale;
        (left - right).norm()
    }))
}

/// `2^-J`-weighted sum of samples, i.e. the midpoint-rule integral.
pub fn integral<T: Real>(f: &SampledFunction<T>) -> Complex<T> {
    f.values().iter().fold(Complex::zero(), |a, b| a + b) * pow2::<T>(-f.resolution())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::{PI, TAU};

    fn hat_spectrum(w: f64) -> f64 {
        (2.0 + w.cos()) / 3.0
    }

    #[test]
    fn fourier_examples() {
        let p = fixtures::pulse::<f64>(10);
        let v = fourier_at(&p, 0.0);
        assert!((v.re - 1.0 / TAU.sqrt()).abs() < 1e-15);
        let f = fixtures::hat::<f64>(6);
        for &w in &[-3.0, 0.5, 7.25] {
            let a = fourier_at(&f.translate(3), w);
            let b = fourier_at(&f, w) * Complex::from_polar(1.0, -3.0 * w);
            assert!((a - b).norm() < 1e-10);
        }
        let z = SampledFunction::<f64>::zero(4);
        assert!(fourier_transform(&z, &[0.0, 1.0]).values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn conjugation_relation() {
        let f = SampledFunction::from_fn(crate::grid::DyadicGrid::new(5, -7, 50), |x: f64| {
            Complex::new(x.sin(), (2.0 * x).cos())
        });
        let g = f.reflect().conj();
        for &w in &[-4.0, 0.3, 9.0] {
            assert!((fourier_at(&g, w) - fourier_at(&f, w).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_fourier_round_trip() {
        let om = uniform_omegas(32.0 * PI, 4096);
        let f = fixtures::gaussian::<f64>(8, 4);
        let back = inverse_fourier(&fourier_transform(&f, &om), *f.grid()).unwrap();
        let err = max_of(back.values().iter().zip(f.values()).map(|(a, b)| (a - b).norm()));
        assert!(err <= 1e-6, "{err}");
        let c = fixtures::cos2_bump::<f64>(8);
        let back = inverse_fourier(&fourier_transform(&c, &om), *c.grid()).unwrap();
        let err = max_of(back.values().iter().zip(c.values()).map(|(a, b)| (a - b).norm()));
        assert!(err <= 1e-4, "{err}");
        let z = FourierSamples::new(om.clone(), vec![Complex::zero(); om.len()]).unwrap();
        assert!(inverse_fourier(&z, *c.grid()).unwrap().values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn correlation_examples() {
        let p = fixtures::pulse::<f64>(10);
        let r = autocorrelation(&p, &p, 16).unwrap();
        assert_eq!(r.as_sequence(), &FilterSequence::delta(0));
        let h = fixtures::hat::<f64>(10);
        let r = autocorrelation(&h, &h, 16).unwrap();
        assert_eq!((r.as_sequence().offset(), r.as_sequence().len()), (-1, 3));
        assert!((r.get(0).re - 2.0 / 3.0).abs() < 1e-6);
        assert!((r.get(1).re - 1.0 / 6.0).abs() < 1e-6);
        assert!((r.get(-1).re - r.get(1).re).abs() < 1e-12);
        let g = fixtures::cos2_bump::<f64>(10);
        let r = autocorrelation(&h, &g, 4).unwrap();
        assert_eq!(r.get(0), h.inner_product(&g).unwrap());
        assert!(autocorrelation(&h, &fixtures::hat(9), 2).is_err());
    }

    #[test]
    fn time_spectrum_examples() {
        let p = fixtures::pulse::<f64>(10);
        let s = power_spectrum_time(&p, &p, 16, 1024).unwrap();
        assert!(s.values().iter().all(|v| (v - Complex::new(1.0, 0.0)).norm() < 1e-10));
        let h = fixtures::hat::<f64>(10);
        let s = power_spectrum_time(&h, &h, 16, 256).unwrap();
        for m in 0..256 {
            assert!((s.values()[m].re - hat_spectrum(s.omega(m))).abs() < 1e-5);
        }
        let z = SampledFunction::<f64>::zero(10);
        assert!(power_spectrum_time(&z, &h, 16, 64).unwrap().values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn frequency_spectrum_full_period_equals_time_route() {
        for f in [fixtures::pulse::<f64>(8), fixtures::hat(8), fixtures::cos2_bump(8)] {
            let a = power_spectrum_time(&f, &f, 16, 128).unwrap();
            let b = power_spectrum_freq(&f, &f, 128, None).unwrap();
            let d = max_of(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()));
            assert!(d < 1e-12, "{d}");
        }
    }

    #[test]
    fn frequency_spectrum_truncated() {
        let h = fixtures::hat::<f64>(10);
        let s = power_spectrum_freq(&h, &h, 128, Some(16)).unwrap();
        for m in 0..128 {
            assert!((s.values()[m].re - hat_spectrum(s.omega(m))).abs() < 1e-5);
        }
        // the pulse tail decays like 1/n, so 64 terms leave about
        // 2 sin^2(w/2) / (64 pi^2) behind
        let p = fixtures::pulse::<f64>(10);
        let s = power_spectrum_freq(&p, &p, 64, Some(64)).unwrap();
        let mid = s.values()[32].re;
        let tail = 1.0 - mid;
        assert!(tail > 2.0 / (65.0 * PI * PI) * 0.9 && tail < 2.0 / (64.0 * PI * PI) * 1.1, "{tail}");
        let z = SampledFunction::<f64>::zero(10);
        assert!(power_spectrum_freq(&z, &z, 16, Some(4)).unwrap().values().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn direct_and_fft_routes_agree() {
        let h = fixtures::hat::<f64>(5);
        let g = fixtures::cos2_bump::<f64>(5);
        let a = periodized_by_fft(&h, &g, 16, 16 * 32, -5, 5);
        let b = periodized_direct(&h, &g, 16, -5, 5);
        let d = max_of(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()));
        assert!(d < 1e-12, "{d}");
    }

    #[test]
    fn riesz_examples() {
        let p = fixtures::pulse::<f64>(10);
        let r = riesz_bounds(&p, 16, 1024).unwrap();
        assert!((r.a - 1.0).abs() < 1e-10 && (r.b - 1.0).abs() < 1e-10);
        let h = fixtures::hat::<f64>(10);
        let r = riesz_bounds(&h, 16, 1024).unwrap();
        assert!((r.a - 1.0 / 3.0).abs() < 1e-3 && (r.b - 1.0).abs() < 1e-3);
        let z = SampledFunction::<f64>::zero(0);
        assert_eq!(riesz_bounds(&z, 16, 64).unwrap(), RieszBounds { a: 0.0, b: 0.0 });
        // the spectrum of any function is real, complex values included
        let c = SampledFunction::new(
            crate::grid::DyadicGrid::new(0, 0, 2),
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)],
        )
        .unwrap();
        let cc = c.add(&c.translate(1).scale(Complex::new(0.5, 0.0))).unwrap();
        let r = riesz_bounds(&cc, 4, 64).unwrap();
        assert!(r.a >= -1e-12 && r.b >= r.a, "{r:?}");
    }

    #[test]
    fn orthonormal_shift_examples() {
        assert!(check_orthonormal_shifts(&fixtures::pulse::<f64>(10), 16, 1024).unwrap() <= 1e-10);
        let h = fixtures::hat::<f64>(10);
        assert!(check_orthonormal_shifts(&h, 16, 1024).unwrap() >= 1.0 / 6.0 - 1e-6);
        let bl = battle_lemarie(&h, BattleLemarieParams::default()).unwrap();
        assert!(check_orthonormal_shifts(&bl, 40, 1024).unwrap() <= 1e-4);
    }

    #[test]
    fn battle_lemarie_examples() {
        let p = fixtures::pulse::<f64>(6);
        let out = battle_lemarie(&p, BattleLemarieParams::default()).unwrap();
        assert!(out.sub(&p).unwrap().max_abs() <= 1e-6);

        let h = fixtures::hat::<f64>(8);
        let a = battle_lemarie(&h, BattleLemarieParams::default()).unwrap();
        let b = battle_lemarie(&h.scale_real(3.5), BattleLemarieParams::default()).unwrap();
        assert_eq!(a.grid(), b.grid());
        assert!(max_of(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm())) <= 1e-10);

        // F_new = F / sqrt(S) on a few frequencies
        let s = |w: f64| hat_spectrum(w);
        for &w in &[0.0, 1.0, 2.5, 3.0] {
            let want = fourier_at(&h, w) / s(w).sqrt();
            assert!((fourier_at(&a, w) - want).norm() < 1e-5);
        }

        let z = SampledFunction::<f64>::zero(4);
        assert!(matches!(battle_lemarie(&z, BattleLemarieParams::default()), Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn psf_examples() {
        let j = 14;
        let g = fixtures::gaussian::<f64>(j, 6);
        let h = 2f64.powi(-j);
        let probes = [h / 2.0, 0.25 + h / 2.0, 0.5 + h / 2.0];
        for tau in [1.0, 2.0] {
            assert!(psf_residual(&g, tau, &probes, 16) <= 1e-8);
        }
        let p = fixtures::pulse::<f64>(8);
        let mids = [1.0 / 512.0, 0.25 + 1.0 / 512.0];
        assert!(psf_residual(&p, 1.0, &mids, 16) <= 1e-3 * 64.0);
        assert_eq!(psf_residual(&SampledFunction::<f64>::zero(3), 1.0, &probes, 4), 0.0);
    }

    #[test]
    fn ipsf_examples() {
        let g = fixtures::gaussian::<f64>(14, 6);
        for tau in [1.0, 2.0] {
            assert!(ipsf_residual(&g, tau, &[0.0, 0.7, 2.0], 16) <= 1e-8);
        }
        assert_eq!(ipsf_residual(&SampledFunction::<f64>::zero(3), 1.0, &[0.0], 4), 0.0);
    }

    #[test]
    fn ipsf_pulse_period_two() {
        // only n = 0 survives on the right: f(0) tau / sqrt(2 pi) with the
        // jump at 0 taking its midpoint value 1/2
        let p = fixtures::pulse::<f64>(10);
        let res = ipsf_residual(&p, 2.0, &[0.4], 400);
        assert!(res < 5e-3, "{res}");
    }

    #[test]
    fn parseval() {
        let f = fixtures::gaussian::<f64>(8, 4);
        let g = f.translate(1);
        let om = uniform_omegas(32.0 * PI, 4096);
        let (a, b) = (fourier_transform(&f, &om), fourier_transform(&g, &om));
        let step = a.step().unwrap();
        let s: Complex<f64> = a.values().iter().zip(b.values()).map(|(x, y)| x * y.conj()).sum::<Complex<f64>>() * step;
        assert!((s - f.inner_product(&g).unwrap()).norm() <= 1e-4);
    }
}
