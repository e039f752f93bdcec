//! Residual-valued checks for scaling filters and scaling functions.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{max_of, Real};
use crate::sequence::{dtft, dtft_at, sums, ztransform_eval, FilterSequence, SpectrumSamples};
use crate::signal::SampledFunction;
use crate::spectra::{autocorrelation, fourier_at, power_spectrum_time, CorrelationSequence};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility<T> {
    /// `|sum_n h_n - sqrt2|`.
    pub residual: T,
    /// `|H(0) - sqrt2|`.
    pub dtft_residual: T,
    /// `|h^(1) - sqrt2|` from the z-transform.
    pub z_residual: T,
}

pub fn check_admissibility<T: Real>(h: &FilterSequence<T>) -> Admissibility<T> {
    let s2 = Complex::new(T::SQRT_2(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    Admissibility {
        residual: (sums(h).total - s2).norm(),
        dtft_residual: (dtft_at(h, T::zero()) - s2).norm(),
        z_residual: (ztransform_eval(h, one).expect("z = 1 is never singular") - s2).norm(),
    }
}

/// `sum_m x_m sum_k conj(y_k) R(2n - m + k)`.
pub(crate) fn two_scale_correlation<T: Real>(
    x: &FilterSequence<T>,
    y: &FilterSequence<T>,
    r: &CorrelationSequence<T>,
    n: i64,
) -> Complex<T> {
    let mut acc = Complex::zero();
    for (m, xm) in x.iter() {
        for (k, yk) in y.iter() {
            acc += xm * yk.conj() * r.get(2 * n - m + k);
        }
    }
    acc
}

/// Correlation range needed to evaluate [`two_scale_correlation`] for
/// `|n| <= n_max`.
pub(crate) fn two_scale_range<T: Real>(x: &FilterSequence<T>, y: &FilterSequence<T>, n_max: usize) -> usize {
    let span = (x.end() - y.offset()).max(y.end() - x.offset()).max(0) as usize;
    2 * n_max + span
}

/// `max_|n|<=n_max |sum_m h_m sum_k conj(h_k) R(2n-m+k) - R(n)|` with
/// `R = R_phi,phi`.
pub fn check_quadrature_time<T: Real>(h: &FilterSequence<T>, phi: &SampledFunction<T>, n_max: usize) -> Result<T> {
    let r = autocorrelation(phi, phi, two_scale_range(h, h, n_max))?;
    let n = n_max as i64;
    Ok(max_of((-n..=n).map(|k| (two_scale_correlation(h, h, &r, k) - r.get(k)).norm())))
}

/// `max_m |X(w) conj(Y(w)) S(w) + X(w+pi) conj(Y(w+pi)) S(w+pi) - 2 S_out(2w)|`.
pub(crate) fn two_scale_spectrum_defect<T: Real>(
    x: &SpectrumSamples<T>,
    y: &SpectrumSamples<T>,
    s_in: &SpectrumSamples<T>,
    s_out: &SpectrumSamples<T>,
) -> T {
    let two = T::one() + T::one();
    max_of((0..x.points()).map(|m| {
        let a = x.values()[m] * y.values()[m].conj() * s_in.values()[m];
        let b = x.shifted_by_pi(m) * y.shifted_by_pi(m).conj() * s_in.shifted_by_pi(m);
        (a + b - s_out.doubled(m) * two).norm()
    }))
}

/// `max_w | |H(w)|^2 S(w) + |H(w+pi)|^2 S(w+pi) - 2 S(2w) |`, with `S` the
/// time-route auto power spectrum of `phi`.
pub fn check_quadrature_freq<T: Real>(
    h: &FilterSequence<T>,
    phi: &SampledFunction<T>,
    points: usize,
    n_max: usize,
) -> Result<T> {
    let hs = dtft(h, points)?;
    let s = power_spectrum_time(phi, phi, n_max, points)?;
    Ok(two_scale_spectrum_defect(&hs, &hs, &s, &s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PouFunction<T> {
    /// `max |sum_n phi(x - n) - c|` over one period.
    pub time_residual: T,
    /// `max_{1<=|n|<=n_trunc} sqrt(2 pi) |phi~(2 pi n)|`.
    pub freq_residual: T,
    pub residual: T,
    /// Mean of the periodization.
    pub c: T,
}

/// Partition-of-unity test for a compactly supported function.
pub fn check_pou_function<T: Real>(phi: &SampledFunction<T>, n_trunc: usize) -> Result<PouFunction<T>> {
    let j = phi.resolution();
    if j < 0 {
        return Err(Error::NotRepresentable("1".into(), j));
    }
    let period = 1i64.checked_shl(j as u32).filter(|p| *p > 0).ok_or(Error::NotRepresentable("1".into(), j))?;
    // fold sparsely: fine lattices of tiny supports would waste a full period
    let mut folded: BTreeMap<i64, Complex<T>> = BTreeMap::new();
    for (k, v) in phi.values().iter().enumerate() {
        *folded.entry((phi.grid().start() + k as i64).rem_euclid(period)).or_insert(Complex::zero()) += v;
    }
    let total = folded.values().fold(Complex::zero(), |a, b| a + b);
    let c = total / T::from_i64(period).unwrap();
    let mut time = max_of(folded.values().map(|v| (v - c).norm()));
    if (folded.len() as i64) < period {
        time = time.max(c.norm());
    }
    let s = T::TAU().sqrt();
    let n = n_trunc as i64;
    let freq = max_of(
        (-n..=n)
            .filter(|&k| k != 0)
            .map(|k| fourier_at(phi, T::TAU() * T::from_i64(k).unwrap()).norm() * s),
    );
    Ok(PouFunction {
        time_residual: time,
        freq_residual: freq,
        residual: time.max(freq),
        c: c.re,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PouFilter<T> {
    /// `|sum_n (-1)^n h_n|`.
    pub alternating: T,
    /// `|sum_n h_2n - sqrt2/2|`.
    pub even_minus: T,
    /// `|sum_n h_2n+1 - sqrt2/2|`.
    pub odd_minus: T,
}

impl<T: Real> PouFilter<T> {
    pub fn max(&self) -> T {
        self.alternating.max(self.even_minus).max(self.odd_minus)
    }
}

pub fn check_pou_filter<T: Real>(h: &FilterSequence<T>) -> PouFilter<T> {
    let s = sums(h);
    let half = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    PouFilter {
        alternating: s.alternating.norm(),
        even_minus: (s.even - half).norm(),
        odd_minus: (s.odd - half).norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mra::cascade::{cascade, CascadeParams};
    use std::f64::consts::SQRT_2;

    #[test]
    fn admissibility_examples() {
        let a = check_admissibility(&fixtures::haar_filter::<f64>());
        assert!(a.residual <= 1e-15);
        assert!((a.residual - a.dtft_residual).abs() <= 1e-14 && (a.residual - a.z_residual).abs() <= 1e-14);
        assert!(check_admissibility(&fixtures::degenerate_filter::<f64>()).residual <= 1e-15);
        let d = check_admissibility(&FilterSequence::<f64>::delta(0)).residual;
        assert!((d - 0.41421356).abs() < 1e-8);
    }

    #[test]
    fn quadrature_time_examples() {
        let haar = fixtures::haar_filter::<f64>();
        let p = fixtures::pulse::<f64>(10);
        assert!(check_quadrature_time(&haar, &p, 8).unwrap() <= 1e-12);
        let hat = fixtures::hat_filter::<f64>();
        let phi = cascade(&hat, &CascadeParams::default()).phi;
        assert_eq!(phi.resolution(), 10);
        assert!(check_quadrature_time(&hat, &phi, 8).unwrap() <= 1e-5);
        let bad = FilterSequence::from_real(0, &[SQRT_2]);
        assert!(check_quadrature_time(&bad, &p, 4).unwrap() >= 1.0);
    }

    #[test]
    fn quadrature_freq_examples() {
        let haar = fixtures::haar_filter::<f64>();
        let p = fixtures::pulse::<f64>(10);
        assert!(check_quadrature_freq(&haar, &p, 1024, 16).unwrap() <= 1e-10);
        let hat = fixtures::hat_filter::<f64>();
        let phi = fixtures::hat::<f64>(10);
        assert!(check_quadrature_freq(&hat, &phi, 1024, 16).unwrap() <= 1e-4);
        // fixed non-MRA filter against the pulse
        let h = FilterSequence::from_real(0, &[0.9, 0.3, 0.2142135623730951]);
        let d = check_quadrature_freq(&h, &p, 256, 16).unwrap();
        assert!(d > 0.1, "{d}");
        assert!(matches!(check_quadrature_freq(&h, &p, 255, 16), Err(Error::BadGrid(255))));
    }

    #[test]
    fn pou_function_examples() {
        let r = check_pou_function(&fixtures::pulse::<f64>(10), 16).unwrap();
        assert!(r.residual <= 1e-12 && (r.c - 1.0).abs() <= 1e-12);
        let r = check_pou_function(&fixtures::cos2_bump::<f64>(10), 16).unwrap();
        assert!(r.residual <= 1e-10 && (r.c - 1.0).abs() <= 1e-12);
        let r = check_pou_function(&fixtures::raised_cosine::<f64>(10, 0.5), 16).unwrap();
        assert!(r.residual <= 1e-10);
        let r = check_pou_function(&fixtures::gaussian::<f64>(6, 3), 4).unwrap();
        assert!(r.time_residual > 1e-3);
    }

    #[test]
    fn pou_function_sparse_fold() {
        let d = crate::signal::SampledFunction::new(
            crate::grid::DyadicGrid::new(24, (1 << 24) - 1, 1),
            vec![Complex::new((1u64 << 24) as f64, 0.0)],
        )
        .unwrap();
        let r = check_pou_function(&d, 2).unwrap();
        assert!((r.c - 1.0).abs() < 1e-12);
        assert!(r.time_residual > 1e6);
    }

    #[test]
    fn pou_filter_examples() {
        assert!(check_pou_filter(&fixtures::haar_filter::<f64>()).max() <= 1e-15);
        assert!(check_pou_filter(&fixtures::hat_filter::<f64>()).alternating <= 1e-16);
        let d = check_pou_filter(&fixtures::degenerate_filter::<f64>());
        assert!((d.alternating - SQRT_2).abs() <= 1e-14);
    }
}
