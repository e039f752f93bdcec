//! Multiresolution systems: dilation-equation solvers, the condition
//! checker, and projections onto the scaling subspaces.

pub mod cascade;
pub mod checks;
mod project;

use serde_json::{json, Map, Value};

use crate::scalar::{lit, sig17, Real};
use crate::sequence::FilterSequence;
use crate::signal::SampledFunction;
use crate::spectra::{check_orthonormal_shifts, fourier_at, riesz_bounds};

pub use cascade::{cascade, dilation_residual, refine, scaling_fn_at, scaling_fn_freq, CascadeParams, CascadeResult, Seed};
pub use checks::{
    check_admissibility, check_pou_filter, check_pou_function, check_quadrature_freq, check_quadrature_time,
    Admissibility, PouFilter, PouFunction,
};
pub use project::{project, ProjectionResult, ORTHOGONALITY_GATE};

/// Parameters shared by the checker suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckParams {
    pub cascade: CascadeParams,
    /// Correlation range `|n| <= n_max`.
    pub n_max: usize,
    /// Frequency grid size (even).
    pub points: usize,
    /// Largest `|n|` in the frequency partition-of-unity test.
    pub pou_trunc: usize,
    /// Half-width of the probe interval for continuity of `phi~` at 0.
    pub continuity_step: f64,
}

impl Default for CheckParams {
    fn default() -> Self {
        CheckParams {
            cascade: CascadeParams::default(),
            n_max: 16,
            points: 1024,
            pou_trunc: 16,
            continuity_step: 1e-7,
        }
    }
}

/// Pass/fail thresholds applied to a [`CheckReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub admissibility: f64,
    pub pou_filter: f64,
    pub dilation: f64,
    pub quadrature: f64,
    pub pou_function: f64,
    pub riesz_lower: f64,
    pub phi_tilde_zero: f64,
    pub continuity: f64,
    pub orthonormal: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            admissibility: 1e-8,
            pou_filter: 1e-8,
            dilation: 1e-4,
            quadrature: 1e-4,
            pou_function: 1e-4,
            riesz_lower: 1e-8,
            phi_tilde_zero: 1e-8,
            continuity: 1e-6,
            orthonormal: 1e-4,
        }
    }
}

/// Everything the checker measured for one scaling filter.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub admissibility: f64,
    pub dilation: f64,
    pub quadrature_time: f64,
    pub quadrature_freq: f64,
    pub pou_function: f64,
    pub pou_constant: f64,
    pub pou_filter: PouFilter<f64>,
    /// `None` when the auto power spectrum was not real.
    pub riesz: Option<(f64, f64)>,
    pub orthonormal_shift: f64,
    pub phi_tilde_zero: f64,
    pub continuity_variation: f64,
    pub converged: bool,
    pub iterations_used: usize,
    pub resolution: i32,
}

/// A failed check: name, measured value, and the bound it violated.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub check: &'static str,
    pub value: f64,
    pub threshold: f64,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} = {} (threshold {:e})", self.check, sig17(self.value), self.threshold)
    }
}

impl CheckReport {
    /// Checks that are necessary for an MRA (orthonormality of the shifts
    /// is reported but not required).
    pub fn failures(&self, t: &Thresholds) -> Vec<Failure> {
        let mut out = Vec::new();
        let mut above = |check, value: f64, threshold| {
            if !(value <= threshold) {
                out.push(Failure { check, value, threshold });
            }
        };
        above("admissibility", self.admissibility, t.admissibility);
        above("dilation", self.dilation, t.dilation);
        above("quadrature_time", self.quadrature_time, t.quadrature);
        above("quadrature_freq", self.quadrature_freq, t.quadrature);
        above("pou_function", self.pou_function, t.pou_function);
        above("pou_filter.alternating", self.pou_filter.alternating, t.pou_filter);
        above("pou_filter.even_minus", self.pou_filter.even_minus, t.pou_filter);
        above("pou_filter.odd_minus", self.pou_filter.odd_minus, t.pou_filter);
        above("continuity_variation", self.continuity_variation, t.continuity);
        if !self.converged {
            out.push(Failure {
                check: "converged",
                value: 0.0,
                threshold: 1.0,
            });
        }
        match self.riesz {
            Some((a, _)) if a > t.riesz_lower => {}
            Some((a, _)) => out.push(Failure {
                check: "riesz.A",
                value: a,
                threshold: t.riesz_lower,
            }),
            None => out.push(Failure {
                check: "riesz.real",
                value: f64::NAN,
                threshold: t.riesz_lower,
            }),
        }
        if !(self.phi_tilde_zero > t.phi_tilde_zero) {
            out.push(Failure {
                check: "phi_tilde_zero",
                value: self.phi_tilde_zero,
                threshold: t.phi_tilde_zero,
            });
        }
        out
    }

    /// Converged, Riesz, and the dilation/continuity/nonvanishing
    /// conditions that together make `(h, phi)` an MRA.
    pub fn is_mra(&self, t: &Thresholds) -> bool {
        self.converged
            && self.dilation <= t.dilation
            && matches!(self.riesz, Some((a, _)) if a > t.riesz_lower)
            && self.phi_tilde_zero > t.phi_tilde_zero
            && self.continuity_variation <= t.continuity
    }

    pub fn is_orthonormal(&self, t: &Thresholds) -> bool {
        self.orthonormal_shift <= t.orthonormal
    }

    /// One key per residual; reals as 17-significant-digit strings.
    pub fn to_json(&self, t: &Thresholds) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        put("admissibility_residual", json!(sig17(self.admissibility)));
        put("dilation_residual", json!(sig17(self.dilation)));
        put("quadrature_time_residual", json!(sig17(self.quadrature_time)));
        put("quadrature_freq_residual", json!(sig17(self.quadrature_freq)));
        put("pou_function_residual", json!(sig17(self.pou_function)));
        put("pou_constant", json!(sig17(self.pou_constant)));
        put(
            "pou_filter_residuals",
            json!({
                "alternating": sig17(self.pou_filter.alternating),
                "even_minus": sig17(self.pou_filter.even_minus),
                "odd_minus": sig17(self.pou_filter.odd_minus),
            }),
        );
        put(
            "riesz",
            match self.riesz {
                Some((a, b)) => json!({"A": sig17(a), "B": sig17(b)}),
                None => Value::Null,
            },
        );
        put("orthonormal_shift_residual", json!(sig17(self.orthonormal_shift)));
        put("phi_tilde_zero", json!(sig17(self.phi_tilde_zero)));
        put("continuity_variation", json!(sig17(self.continuity_variation)));
        put("converged", json!(self.converged));
        put("iterations_used", json!(self.iterations_used));
        put("resolution", json!(self.resolution));
        put("is_mra", json!(self.is_mra(t)));
        put("is_orthonormal", json!(self.is_orthonormal(t)));
        put(
            "failures",
            Value::Array(self.failures(t).iter().map(|f| json!(f.check)).collect()),
        );
        Value::Object(m)
    }
}

fn to64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A scaling filter, its scaling function, and the checker's verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct MraSystem<T> {
    pub h: FilterSequence<T>,
    pub phi: SampledFunction<T>,
    pub report: CheckReport,
}

impl<T: Real> MraSystem<T> {
    /// Runs the cascade and the full checker.
    pub fn build(h: &FilterSequence<T>, params: &CheckParams) -> Self {
        let c = cascade(h, &params.cascade);
        let report = report_for(h, &c, params);
        MraSystem {
            h: h.clone(),
            phi: c.phi,
            report,
        }
    }
}

/// Runs the cascade and every condition check; packages the results.
pub fn sufficiency_report<T: Real>(h: &FilterSequence<T>, params: &CheckParams) -> CheckReport {
    MraSystem::build(h, params).report
}

/// Checker results for an already computed cascade.
pub fn report_for<T: Real>(h: &FilterSequence<T>, c: &CascadeResult<T>, params: &CheckParams) -> CheckReport {
    let phi = &c.phi;
    let nan = || T::nan();
    let pou = check_pou_function(phi, params.pou_trunc).ok();
    let f0 = fourier_at(phi, T::zero());
    let d = lit::<T>(params.continuity_step);
    let half = lit::<T>(0.5);
    let variation = [d, -d, d * half, -d * half]
        .iter()
        .map(|&w| to64((fourier_at(phi, w) - f0).norm()))
        .fold(0.0, f64::max);
    CheckReport {
        admissibility: to64(check_admissibility(h).residual),
        dilation: to64(c.dilation_residual),
        quadrature_time: to64(check_quadrature_time(h, phi, params.n_max).unwrap_or_else(|_| nan())),
        quadrature_freq: to64(check_quadrature_freq(h, phi, params.points, params.n_max).unwrap_or_else(|_| nan())),
        pou_function: pou.map(|p| to64(p.residual)).unwrap_or(f64::NAN),
        pou_constant: pou.map(|p| to64(p.c)).unwrap_or(f64::NAN),
        pou_filter: {
            let p = check_pou_filter(h);
            PouFilter {
                alternating: to64(p.alternating),
                even_minus: to64(p.even_minus),
                odd_minus: to64(p.odd_minus),
            }
        },
        riesz: riesz_bounds(phi, params.n_max, params.points)
            .ok()
            .map(|r| (to64(r.a), to64(r.b))),
        orthonormal_shift: to64(check_orthonormal_shifts(phi, params.n_max, params.points).unwrap_or_else(|_| nan())),
        phi_tilde_zero: to64(f0.norm()),
        continuity_variation: variation,
        converged: c.converged,
        iterations_used: c.iterations_used,
        resolution: phi.resolution(),
    }
}
