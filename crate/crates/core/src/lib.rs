//! Multiresolution analysis and wavelet construction on dyadic grids.
//!
//! Functions are sampled at the cell midpoints of a dyadic lattice, so the
//! translation and dilation operators act exactly on the sample metadata.
//! On top of that sit the sequence calculus (DTFT, z-transform,
//! conjugate quadrature filters), spectral tools (Fourier transform,
//! correlation, power spectra, Riesz bounds, Poisson summation), dilation
//! equation solvers with a full condition checker, and wavelet builders.
//!
//! Everything is generic over [`scalar::Real`]; the `*F64` aliases below
//! fix the scalar to `f64`.

pub mod error;
pub mod fixtures;
pub mod grid;
pub mod io;
pub mod mra;
pub mod scalar;
pub mod sequence;
pub mod signal;
pub mod spectra;
pub mod wavelet;

pub use error::{Error, Result};
pub use grid::{Dyadic, DyadicGrid};
pub use mra::{CascadeParams, CheckReport, MraSystem, ProjectionResult};
pub use scalar::Real;
pub use sequence::{FilterSequence, SpectrumSamples};
pub use signal::SampledFunction;
pub use spectra::{CorrelationSequence, FourierSamples};
pub use wavelet::WaveletSystem;

pub type SampledFunctionF64 = SampledFunction<f64>;
pub type SampledFunctionF32 = SampledFunction<f32>;
pub type FilterSequenceF64 = FilterSequence<f64>;
pub type FilterSequenceF32 = FilterSequence<f32>;
pub type SpectrumSamplesF64 = SpectrumSamples<f64>;
pub type FourierSamplesF64 = FourierSamples<f64>;
pub type MraSystemF64 = MraSystem<f64>;
pub type WaveletSystemF64 = WaveletSystem<f64>;
