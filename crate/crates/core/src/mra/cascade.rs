//! Dilation equation solvers: cascade iteration in time and the truncated
//! infinite product in frequency.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::DyadicGrid;
use crate::mra::checks::check_admissibility;
use crate::scalar::{lit, max_of, Real};
use crate::sequence::{dtft_at, FilterSequence};
use crate::signal::SampledFunction;
use crate::spectra::FourierSamples;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeParams {
    /// Maximum number of refinement steps.
    pub iterations: usize,
    /// Stop once consecutive iterates differ by at most this much.
    pub tol: f64,
    /// Keep refining until this resolution even after convergence.
    pub min_resolution: i32,
    /// Refuse to grow an iterate beyond this many samples.
    pub max_samples: usize,
}

impl Default for CascadeParams {
    fn default() -> Self {
        CascadeParams {
            iterations: 24,
            tol: 1e-9,
            min_resolution: 10,
            max_samples: 1 << 22,
        }
    }
}

impl CascadeParams {
    pub fn with_iterations(iterations: usize) -> Self {
        CascadeParams {
            iterations,
            ..Default::default()
        }
    }
}

/// How the first iterate was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    /// `1_[0,1)` at resolution 0.
    Pulse,
    /// Exact values of the solution at the half-integers, from the
    /// eigenvector of the dilation equation on the integers.
    IntegerEigenvector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeResult<T> {
    pub phi: SampledFunction<T>,
    pub converged: bool,
    pub iterations_used: usize,
    pub dilation_residual: T,
    pub seed: Seed,
    /// `||phi_k||` for every iterate including the seed.
    pub norm_history: Vec<T>,
    /// Distance between consecutive iterates.
    pub change_history: Vec<T>,
}

/// One application of `phi -> sum_n h_n D T^n phi`.
pub fn refine<T: Real>(h: &FilterSequence<T>, phi: &SampledFunction<T>) -> SampledFunction<T> {
    let mut out = SampledFunction::zero(phi.resolution() + 1);
    for (n, hn) in h.iter() {
        out.axpy(hn, &phi.compose_dt(1, n));
    }
    out
}

/// Interpolates `f` onto the cell midpoints of the next coarser lattice.
///
/// Each coarse midpoint lies halfway between two fine ones, so interior
/// values are plain averages. A coarse cell with only one child inside
/// the support is extrapolated linearly from the two nearest samples (held
/// constant when there is only one sample).
pub(crate) fn restrict<T: Real>(f: &SampledFunction<T>) -> SampledFunction<T> {
    let j = f.resolution() - 1;
    if f.is_empty() {
        return SampledFunction::zero(j);
    }
    let (s, e) = (f.grid().start(), f.grid().end());
    let lo = s.div_euclid(2);
    let hi = (e + 1).div_euclid(2);
    let v = f.values();
    let n = v.len();
    let half = lit::<T>(0.5);
    let three_half = lit::<T>(1.5);
    let values = (lo..hi)
        .map(|c| {
            let (a, b) = (2 * c, 2 * c + 1);
            match (a >= s, b < e) {
                (true, true) => (f.at_cell(a) + f.at_cell(b)) * half,
                (false, _) if n == 1 => v[0],
                (false, _) => v[0] * three_half - v[1] * half,
                (_, false) if n == 1 => v[n - 1],
                (_, false) => v[n - 1] * three_half - v[n - 2] * half,
            }
        })
        .collect();
    SampledFunction::from_parts_unchecked(DyadicGrid::new(j, lo, (hi - lo) as usize), values)
}

/// `|| restrict(fine) - coarse ||` on the coarse lattice.
pub(crate) fn coarse_distance<T: Real>(fine: &SampledFunction<T>, coarse: &SampledFunction<T>) -> T {
    let r = restrict(fine);
    r.sub(coarse).map(|d| d.norm()).unwrap_or_else(|_| T::infinity())
}

/// Solves `A v = b` in the least-squares sense via the normal equations.
fn least_squares<T: Real>(a: &[Vec<Complex<T>>], b: &[Complex<T>]) -> Option<Vec<Complex<T>>> {
    let cols = a.first()?.len();
    let mut m: Vec<Vec<Complex<T>>> = vec![vec![Complex::zero(); cols + 1]; cols];
    for (row, &rhs) in a.iter().zip(b) {
        for i in 0..cols {
            let ci = row[i].conj();
            for k in 0..cols {
                m[i][k] += ci * row[k];
            }
            m[i][cols] += ci * rhs;
        }
    }
    for p in 0..cols {
        let piv = (p..cols).max_by(|&x, &y| m[x][p].norm().partial_cmp(&m[y][p].norm()).unwrap())?;
        if m[piv][p].norm() < lit(1e-12) {
            return None;
        }
        m.swap(p, piv);
        for r in 0..cols {
            if r != p {
                let factor = m[r][p] / m[p][p];
                for k in p..=cols {
                    let t = m[p][k];
                    m[r][k] -= factor * t;
                }
            }
        }
    }
    Some((0..cols).map(|i| m[i][cols] / m[i][i]).collect())
}

/// Exact half-integer samples of the solution when the dilation equation
/// restricted to the interior integers has a normalizable eigenvector.
fn eigen_seed<T: Real>(h: &FilterSequence<T>) -> Option<SampledFunction<T>> {
    if h.len() < 3 {
        return None;
    }
    let o = h.offset();
    let last = h.end() - 1;
    let interior: Vec<i64> = (o + 1..last).collect();
    let p = interior.len();
    let s2 = T::SQRT_2();
    let one = Complex::new(T::one(), T::zero());
    // phi(n) = sum_k sqrt2 h_k phi(2n - k) = sum_m sqrt2 h_(2n-m) phi(m)
    let mut a: Vec<Vec<Complex<T>>> = interior
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            interior
                .iter()
                .enumerate()
                .map(|(jx, &m)| h.get(2 * n - m) * s2 - if i == jx { one } else { Complex::zero() })
                .collect()
        })
        .collect();
    a.push(vec![one; p]);
    let mut b = vec![Complex::zero(); p];
    b.push(one);
    let v = least_squares(&a, &b)?;
    let defect = max_of(a[..p].iter().map(|row| {
        row.iter().zip(&v).map(|(x, y)| x * y).fold(Complex::<T>::zero(), |s, t| s + t).norm()
    }));
    if !(defect <= lit(1e-10)) {
        return None;
    }
    let at_int = |m: i64| -> Complex<T> {
        if m > o && m < last {
            v[(m - o - 1) as usize]
        } else {
            Complex::zero()
        }
    };
    let cells = (last - o) as usize;
    let mut mids: Vec<Complex<T>> = (o..last)
        .map(|c| h.iter().map(|(k, hk)| hk * s2 * at_int(2 * c + 1 - k)).fold(Complex::zero(), |s, t| s + t))
        .collect();
    let total: Complex<T> = mids.iter().fold(Complex::zero(), |s, t| s + t);
    if total.norm() < lit(1e-12) {
        return None;
    }
    for m in &mut mids {
        *m = *m / total;
    }
    SampledFunction::new(DyadicGrid::new(0, o, cells), mids).ok()
}

fn seed<T: Real>(h: &FilterSequence<T>) -> (SampledFunction<T>, Seed) {
    match eigen_seed(h) {
        Some(phi) => (phi, Seed::IntegerEigenvector),
        None => (crate::fixtures::pulse(0), Seed::Pulse),
    }
}

/// `||phi - sum_n h_n D T^n phi|| / ||phi||`, compared on `phi`'s lattice.
/// Returns `||phi||` itself when that is below `1e-14`.
pub fn dilation_residual<T: Real>(h: &FilterSequence<T>, phi: &SampledFunction<T>) -> T {
    let norm = phi.norm();
    if norm < lit(1e-14) {
        return norm;
    }
    coarse_distance(&refine(h, phi), phi) / norm
}

/// Fixed-point iteration of the dilation equation.
///
/// The seed is the exact solution at the half-integers whenever the
/// integer eigenvector exists (then every iterate is exact on its own
/// lattice), and `1_[0,1)` otherwise. Consecutive iterates live on
/// resolutions `J` and `J + 1`; they are compared on the coarser lattice
/// with the finer one interpolated onto its midpoints. Iteration stops
/// once that distance is at most `tol` and the resolution has reached
/// `min_resolution`.
pub fn cascade<T: Real>(h: &FilterSequence<T>, params: &CascadeParams) -> CascadeResult<T> {
    assert!(params.iterations >= 1, "cascade needs at least one iteration");
    let (mut phi, seed) = seed(h);
    let mut norm_history = vec![phi.norm()];
    let mut change_history = Vec::new();
    let mut converged = false;
    let mut iterations_used = 0;
    let tol = lit::<T>(params.tol);
    for k in 1..=params.iterations {
        let span = (h.end() - h.offset()).max(1) as u128 - 1;
        let next_len = 2 * phi.len() as u128 + (span << (phi.resolution() + 1).clamp(0, 100) as u32);
        if next_len > params.max_samples as u128 {
            break;
        }
        let next = refine(h, &phi);
        let change = coarse_distance(&next, &phi);
        change_history.push(change);
        norm_history.push(next.norm());
        phi = next;
        iterations_used = k;
        converged = change <= tol;
        if converged && phi.resolution() >= params.min_resolution {
            break;
        }
    }
    let dilation_residual = dilation_residual(h, &phi);
    if phi.norm() < lit(1e-14) {
        converged = false;
    }
    CascadeResult {
        phi,
        converged,
        iterations_used,
        dilation_residual,
        seed,
        norm_history,
        change_history,
    }
}

/// Admissibility residual above which the infinite product is refused.
pub const ADMISSIBILITY_GATE: f64 = 1e-8;

/// `phi~(w) = (2 pi)^-1/2 prod_{n=1..N} (sqrt2/2) H(w / 2^n)`.
pub fn scaling_fn_freq<T: Real>(h: &FilterSequence<T>, omegas: &[T], levels: usize) -> Result<FourierSamples<T>> {
    let adm = check_admissibility(h).residual;
    if !(adm <= lit(ADMISSIBILITY_GATE)) {
        return Err(Error::InadmissibleFilter(adm.to_f64().unwrap_or(f64::NAN)));
    }
    let values = omegas.par_iter().map(|&w| scaling_fn_at(h, w, levels)).collect();
    FourierSamples::new(omegas.to_vec(), values)
}

/// Single-frequency form of [`scaling_fn_freq`] without the admissibility gate.
pub fn scaling_fn_at<T: Real>(h: &FilterSequence<T>, omega: T, levels: usize) -> Complex<T> {
    let half = T::FRAC_1_SQRT_2();
    let two = lit::<T>(2.0);
    let mut w = omega;
    let mut acc = Complex::new(T::one() / T::TAU().sqrt(), T::zero());
    for _ in 0..levels {
        w = w / two;
        acc = acc * dtft_at(h, w) * half;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::spectra::fourier_at;
    use std::f64::consts::{PI, SQRT_2, TAU};

    #[test]
    fn haar_is_exact_after_one_step() {
        let r = cascade(&fixtures::haar_filter::<f64>(), &CascadeParams::with_iterations(1));
        assert!(r.converged);
        assert_eq!(r.iterations_used, 1);
        assert_eq!(r.seed, Seed::Pulse);
        assert!(r.dilation_residual <= 1e-14);
        assert!(r.phi.values().iter().all(|v| (v - Complex::new(1.0, 0.0)).norm() <= 1e-15));
        assert_eq!(r.phi.grid().support_hi(), crate::grid::Dyadic::from_int(1));
    }

    #[test]
    fn hat_cascade_is_the_triangle() {
        let r = cascade(&fixtures::hat_filter::<f64>(), &CascadeParams::with_iterations(12));
        assert_eq!(r.seed, Seed::IntegerEigenvector);
        assert!(r.converged);
        let want = fixtures::hat::<f64>(r.phi.resolution());
        assert_eq!(r.phi.grid(), want.grid());
        let err = max_of(r.phi.values().iter().zip(want.values()).map(|(a, b)| (a - b).norm()));
        assert!(err <= 1e-6, "{err}");
        assert!(r.dilation_residual <= 10.0 * 1e-9);
    }

    #[test]
    fn degenerate_filter_diverges() {
        let r = cascade(&fixtures::degenerate_filter::<f64>(), &CascadeParams::default());
        assert!(!r.converged);
        assert_eq!(r.iterations_used, 24);
        for (k, n) in r.norm_history.iter().enumerate() {
            assert!((n * n - 2f64.powi(k as i32)).abs() <= 1e-9 * 2f64.powi(k as i32));
        }
        assert!(r.dilation_residual > 0.5);
    }

    #[test]
    fn daubechies_seed_is_exact_on_integers() {
        let h = fixtures::daubechies4::<f64>();
        let s = eigen_seed(&h).unwrap();
        // phi(1/2) from phi(1) = (1 + sqrt3)/2
        let s3 = 3f64.sqrt();
        let phi1 = (1.0 + s3) / 2.0;
        let want = SQRT_2 * h.get(0).re * phi1;
        assert!((s.values()[0].re - want).abs() < 1e-12);
        let sum: f64 = s.values().iter().map(|v| v.re).sum();
        assert!((sum - 1.0).abs() < 1e-14);
    }

    #[test]
    fn restrict_rules() {
        let f = SampledFunction::new(
            DyadicGrid::new(1, 1, 3),
            vec![Complex::new(1.0, 0.0), Complex::new(3.0, 0.0), Complex::new(5.0, 0.0)],
        )
        .unwrap();
        let r = restrict(&f);
        assert_eq!((r.grid().start(), r.len()), (0, 2));
        // cell 0: only child 1 inside, extrapolate 1.5*1 - 0.5*3 = 0
        assert_eq!(r.values()[0].re, 0.0);
        assert_eq!(r.values()[1].re, 4.0);
    }

    #[test]
    fn product_examples() {
        let h = fixtures::haar_filter::<f64>();
        let v = scaling_fn_freq(&h, &[0.0], 24).unwrap();
        assert!((v.values()[0].re - 1.0 / TAU.sqrt()).abs() <= 1e-16);
        let hat = fixtures::hat_filter::<f64>();
        let om = crate::spectra::uniform_omegas(8.0 * PI, 64);
        let p = scaling_fn_freq(&hat, &om, 24).unwrap();
        for (w, v) in om.iter().zip(p.values()) {
            let s = if *w == 0.0 { 1.0 } else { (w / 2.0).sin() / (w / 2.0) };
            let want = Complex::from_polar(s * s / TAU.sqrt(), -w);
            assert!((v - want).norm() < 1e-6);
        }
        let haar_ft = fixtures::pulse::<f64>(16);
        let q = scaling_fn_freq(&h, &om, 24).unwrap();
        for (w, v) in om.iter().zip(q.values()) {
            assert!((fourier_at(&haar_ft, *w) - v).norm() < 1e-6);
        }
        let bad = FilterSequence::<f64>::delta(0);
        assert!(matches!(scaling_fn_freq(&bad, &om, 4), Err(Error::InadmissibleFilter(_))));
    }

    #[test]
    fn product_is_stable_in_depth() {
        let om = crate::spectra::uniform_omegas(8.0 * PI, 128);
        for h in [fixtures::haar_filter::<f64>(), fixtures::hat_filter(), fixtures::daubechies4()] {
            let a = scaling_fn_freq(&h, &om, 28).unwrap();
            let b = scaling_fn_freq(&h, &om, 32).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-8);
        }
    }
}
