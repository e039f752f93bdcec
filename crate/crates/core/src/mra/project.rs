use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mra::MraSystem;
use crate::scalar::Real;
use crate::sequence::FilterSequence;
use crate::signal::SampledFunction;

/// Shift-orthonormality residual above which projection is refused.
pub const ORTHOGONALITY_GATE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult<T> {
    pub level: i32,
    /// `c_n = <f | D^j T^n phi> / ||D^j T^n phi||^2`.
    pub coeffs: FilterSequence<T>,
    /// `A_j f = sum_n c_n D^j T^n phi`.
    pub approximation: SampledFunction<T>,
}

/// Orthogonal projection of `f` onto `V_j = span{D^j T^n phi}`.
///
/// `f` and the dilated scaling function are brought to the common
/// resolution `max(J_f, J_phi + j)` by upward resampling.
pub fn project<T: Real>(f: &SampledFunction<T>, sys: &MraSystem<T>, j: i32) -> Result<ProjectionResult<T>> {
    if !(sys.report.orthonormal_shift <= ORTHOGONALITY_GATE) {
        return Err(Error::NonOrthogonalFamily(sys.report.orthonormal_shift));
    }
    let jc = f.resolution().max(sys.phi.resolution() + j);
    let f = f.resample(jc)?;
    let base = sys.phi.dilate(j).resample(jc)?;
    if jc - j < 0 {
        return Err(Error::NotRepresentable(format!("2^{}", -j), jc));
    }
    let step = 1i64 << (jc - j);
    if f.is_empty() || base.is_empty() {
        return Ok(ProjectionResult {
            level: j,
            coeffs: FilterSequence::zero(),
            approximation: SampledFunction::zero(jc),
        });
    }
    let (fs, fe) = (f.grid().start(), f.grid().end());
    let (bs, be) = (base.grid().start(), base.grid().end());
    // shift n overlaps when bs + n step < fe and be + n step > fs
    let n_lo = (fs - be).div_euclid(step) + 1;
    let n_hi = (fe - bs + step - 1).div_euclid(step) - 1;
    let norm_sq = base.norm_sqr();
    let coeffs: Vec<Complex<T>> = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| f.inner_product_shifted(&base, n * step) / norm_sq)
        .collect();
    let coeffs = FilterSequence::new(n_lo, coeffs);
    let mut approximation = SampledFunction::zero(jc);
    for (n, c) in coeffs.iter() {
        approximation.axpy(c, &base.translate_dyadic(crate::grid::Dyadic::new(n as i128, j))?);
    }
    Ok(ProjectionResult {
        level: j,
        coeffs,
        approximation,
    })
}
