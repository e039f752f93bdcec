//! Wavelets built from a multiresolution system and a wavelet filter.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mra::checks::{two_scale_correlation, two_scale_range, two_scale_spectrum_defect};
use crate::mra::{refine, MraSystem};
use crate::scalar::{max_of, Real};
use crate::sequence::{cqf, dtft, dtft_at, sums, ztransform_eval, FilterSequence};
use crate::signal::SampledFunction;
use crate::spectra::{autocorrelation, power_spectrum_time, FourierSamples};

/// Residuals of the three two-scale identities (`phi/phi`, `psi/psi`,
/// `phi/psi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleResidual<T> {
    pub hh: T,
    pub gg: T,
    pub hg: T,
}

impl<T: Real> TripleResidual<T> {
    pub fn max(&self) -> T {
        self.hh.max(self.gg).max(self.hg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSystem<T> {
    pub base: MraSystem<T>,
    pub g: FilterSequence<T>,
    /// `psi = sum_n g_n D T^n phi`, one resolution above `phi`.
    pub psi: SampledFunction<T>,
    /// `(N, sign)` when `g` came from [`cqf`].
    pub cqf: Option<(i64, i32)>,
    /// Distance between `psi` and an independent cell-by-cell rebuild.
    pub rebuild_residual: T,
}

/// Default CQF shift: keeps `g`'s support on top of `h`'s.
pub fn default_shift<T: Real>(h: &FilterSequence<T>) -> i64 {
    if h.is_empty() {
        0
    } else {
        2 * h.offset() + h.len() as i64 - 1
    }
}

/// Direct evaluation `psi[c] = sum_n g_n sqrt2 phi[c - n 2^J]`.
fn rebuild<T: Real>(g: &FilterSequence<T>, phi: &SampledFunction<T>, like: &SampledFunction<T>) -> T {
    let s2 = T::SQRT_2();
    let step = 1i64 << phi.resolution().max(0);
    let lo = like.grid().start();
    let diff = (0..like.len())
        .into_par_iter()
        .map(|k| {
            let c = lo + k as i64;
            let v = g
                .iter()
                .map(|(n, gn)| gn * phi.at_cell(c - n * step))
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
                * s2;
            (v - like.values()[k]).norm()
        })
        .collect::<Vec<_>>();
    max_of(diff)
}

pub fn build_wavelet<T: Real>(sys: &MraSystem<T>, g: &FilterSequence<T>) -> Result<WaveletSystem<T>> {
    if !sys.report.converged {
        return Err(Error::DegenerateBase);
    }
    if sys.phi.resolution() < 0 {
        return Err(Error::NotRepresentable("1".into(), sys.phi.resolution()));
    }
    let psi = refine(g, &sys.phi);
    let rebuild_residual = rebuild(g, &sys.phi, &psi);
    Ok(WaveletSystem {
        base: sys.clone(),
        g: g.clone(),
        psi,
        cqf: None,
        rebuild_residual,
    })
}

/// [`build_wavelet`] with `g = cqf(h, shift, sign)`; `shift` defaults to
/// [`default_shift`].
pub fn build_cqf_wavelet<T: Real>(sys: &MraSystem<T>, shift: Option<i64>, sign: i32) -> Result<WaveletSystem<T>> {
    let n = shift.unwrap_or_else(|| default_shift(&sys.h));
    let mut w = build_wavelet(sys, &cqf(&sys.h, n, sign))?;
    w.cqf = Some((n, sign));
    Ok(w)
}

/// `psi~(w) = (sqrt2/2) G(w/2) phi~(w/2)`.
pub fn wavelet_freq<T: Real>(
    g: &FilterSequence<T>,
    phi_tilde: impl Fn(T) -> Complex<T> + Sync,
    omegas: &[T],
) -> FourierSamples<T> {
    let two = T::one() + T::one();
    let values = omegas
        .par_iter()
        .map(|&w| dtft_at(g, w / two) * phi_tilde(w / two) * T::FRAC_1_SQRT_2())
        .collect();
    FourierSamples::new(omegas.to_vec(), values).expect("lengths match")
}

impl<T: Real> WaveletSystem<T> {
    /// `phi` on `psi`'s lattice.
    pub fn phi_fine(&self) -> Result<SampledFunction<T>> {
        self.base.phi.resample(self.psi.resolution())
    }
}

/// Time-domain two-scale identities for `R_phi,phi`, `R_psi,psi`, `R_phi,psi`
/// over `|n| <= n_max`.
pub fn check_wavelet_quadrature_time<T: Real>(ws: &WaveletSystem<T>, n_max: usize) -> Result<TripleResidual<T>> {
    let (h, g, phi) = (&ws.base.h, &ws.g, &ws.base.phi);
    let range = two_scale_range(h, h, n_max)
        .max(two_scale_range(g, g, n_max))
        .max(two_scale_range(h, g, n_max));
    let r = autocorrelation(phi, phi, range)?;
    let rpp = autocorrelation(&ws.psi, &ws.psi, n_max)?;
    let rfp = autocorrelation(&ws.phi_fine()?, &ws.psi, n_max)?;
    let n = n_max as i64;
    let defect = |x: &FilterSequence<T>, y: &FilterSequence<T>, rhs: &dyn Fn(i64) -> Complex<T>| {
        max_of((-n..=n).map(|k| (two_scale_correlation(x, y, &r, k) - rhs(k)).norm()))
    };
    Ok(TripleResidual {
        hh: defect(h, h, &|k| r.get(k)),
        gg: defect(g, g, &|k| rpp.get(k)),
        hg: defect(h, g, &|k| rfp.get(k)),
    })
}

/// Frequency-domain two-scale identities:
/// `|H|^2 S_pp + shift = 2 S_pp(2w)`, `|G|^2 S_pp + shift = 2 S_ss(2w)`,
/// `H conj(G) S_pp + shift = 2 S_ps(2w)`.
pub fn check_wavelet_quadrature_freq<T: Real>(
    ws: &WaveletSystem<T>,
    points: usize,
    n_max: usize,
) -> Result<TripleResidual<T>> {
    let hs = dtft(&ws.base.h, points)?;
    let gs = dtft(&ws.g, points)?;
    let phi = &ws.base.phi;
    let s_pp = power_spectrum_time(phi, phi, n_max, points)?;
    let s_ss = power_spectrum_time(&ws.psi, &ws.psi, n_max, points)?;
    let s_ps = power_spectrum_time(&ws.phi_fine()?, &ws.psi, n_max, points)?;
    Ok(TripleResidual {
        hh: two_scale_spectrum_defect(&hs, &hs, &s_pp, &s_pp),
        gg: two_scale_spectrum_defect(&gs, &gs, &s_pp, &s_ss),
        hg: two_scale_spectrum_defect(&hs, &gs, &s_pp, &s_ps),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CqfSufficiency<T> {
    /// `| |G(pi)| - sqrt2 |`.
    pub residual: T,
    /// `G(pi)` itself; its sign depends on the CQF sign convention.
    pub g_at_pi: Complex<T>,
    /// `| |g^(-1)| - |G(pi)| |`.
    pub z_agreement: T,
}

pub fn cqf_sufficiency<T: Real>(g: &FilterSequence<T>) -> CqfSufficiency<T> {
    let at_pi = sums(g).alternating;
    let z = ztransform_eval(g, Complex::new(-T::one(), T::zero())).expect("z = -1 is never singular");
    CqfSufficiency {
        residual: (at_pi.norm() - T::SQRT_2()).abs(),
        g_at_pi: at_pi,
        z_agreement: (z.norm() - at_pi.norm()).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mra::{scaling_fn_at, CheckParams};
    use crate::spectra::{fourier_at, fourier_transform, integral, uniform_omegas};
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn system(h: FilterSequence<f64>) -> MraSystem<f64> {
        MraSystem::build(&h, &CheckParams::default())
    }

    #[test]
    fn haar_wavelet_is_exact() {
        let sys = system(fixtures::haar_filter());
        let ws = build_cqf_wavelet(&sys, None, 1).unwrap();
        assert_eq!(ws.cqf, Some((1, 1)));
        assert_eq!(ws.g, FilterSequence::from_real(0, &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]));
        let j = ws.psi.resolution();
        let half = 1usize << (j - 1);
        assert_eq!(ws.psi.len(), 2 * half);
        assert_eq!(ws.psi.grid().start(), 0);
        for (k, v) in ws.psi.values().iter().enumerate() {
            let want = if k < half { 1.0 } else { -1.0 };
            assert!((v - Complex::new(want, 0.0)).norm() <= 1e-15);
        }
        assert!(ws.rebuild_residual <= 1e-15);
    }

    #[test]
    fn g_equal_h_gives_phi_and_zero_gives_zero() {
        let sys = system(fixtures::hat_filter());
        let ws = build_wavelet(&sys, &sys.h).unwrap();
        let phi_fine = ws.phi_fine().unwrap();
        let d = ws.psi.sub(&phi_fine).unwrap();
        // linear resampling is exact except next to the kink at x = 1
        assert!(d.max_abs() <= ws.psi.spacing(), "{}", d.max_abs());
        assert!(d.norm() <= 1e-3, "{}", d.norm());
        let z = build_wavelet(&sys, &FilterSequence::zero()).unwrap();
        assert!(z.psi.is_empty());
        let q = check_wavelet_quadrature_time(&z, 4).unwrap();
        assert_eq!(q.gg, 0.0);
    }

    #[test]
    fn degenerate_base_is_refused() {
        let sys = system(fixtures::degenerate_filter());
        assert_eq!(build_wavelet(&sys, &sys.h), Err(Error::DegenerateBase));
    }

    #[test]
    fn wavelet_freq_matches_time() {
        for h in [fixtures::haar_filter::<f64>(), fixtures::hat_filter()] {
            let sys = system(h.clone());
            let ws = build_cqf_wavelet(&sys, None, 1).unwrap();
            let om = uniform_omegas(8.0 * PI, 64);
            let f = wavelet_freq(&ws.g, |w| scaling_fn_at(&h, w, 30), &om);
            let t = fourier_transform(&ws.psi, &om);
            assert!(f.max_abs_diff(&t) <= 1e-5, "{}", f.max_abs_diff(&t));
            assert!(f.values()[32].norm() < 1e-15);
            // g = h reproduces the two-scale identity for phi
            let p = wavelet_freq(&h, |w| scaling_fn_at(&h, w, 30), &om);
            for (w, v) in om.iter().zip(p.values()) {
                assert!((v - scaling_fn_at(&h, *w, 31)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_haar() {
        let sys = system(fixtures::haar_filter());
        let ws = build_cqf_wavelet(&sys, None, 1).unwrap();
        assert!(check_wavelet_quadrature_time(&ws, 8).unwrap().max() <= 1e-10);
        assert!(check_wavelet_quadrature_freq(&ws, 1024, 16).unwrap().max() <= 1e-9);
    }

    #[test]
    fn quadrature_hat() {
        let sys = system(fixtures::hat_filter());
        let ws = build_cqf_wavelet(&sys, None, 1).unwrap();
        assert!(check_wavelet_quadrature_time(&ws, 8).unwrap().max() <= 1e-4);
        assert!(check_wavelet_quadrature_freq(&ws, 1024, 16).unwrap().max() <= 1e-4);
        let same = build_wavelet(&sys, &sys.h).unwrap();
        let q = check_wavelet_quadrature_freq(&same, 256, 16).unwrap();
        assert!((q.hh - q.gg).abs() < 1e-4 && (q.hh - q.hg).abs() < 1e-4);
    }

    #[test]
    fn zero_mean() {
        let sys = system(fixtures::hat_filter());
        let ws = build_cqf_wavelet(&sys, None, 1).unwrap();
        assert!(integral(&ws.psi).norm() <= 1e-8);
        assert!((fourier_at(&ws.psi, 0.0).norm() * (2.0 * PI).sqrt()) <= 1e-8);
    }

    #[test]
    fn cqf_sufficiency_examples() {
        let g = FilterSequence::from_real(0, &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]);
        let r = cqf_sufficiency(&g);
        assert!(r.residual <= 1e-15);
        assert!((r.g_at_pi.re - SQRT_2).abs() <= 1e-15);
        assert!(r.z_agreement <= 1e-14);
        let d = cqf_sufficiency(&FilterSequence::<f64>::delta(0));
        assert!((d.residual - (SQRT_2 - 1.0)).abs() < 1e-15);
        let flipped = cqf_sufficiency(&g.scale(Complex::new(-1.0, 0.0)));
        assert!(flipped.residual <= 1e-15);
        assert!((flipped.g_at_pi.re + SQRT_2).abs() <= 1e-15);
    }
}
