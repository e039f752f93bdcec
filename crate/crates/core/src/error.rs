use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("resolution mismatch: {0} vs {1}")]
    ResolutionMismatch(i32, i32),

    #[error("cannot coarsen from resolution {from} to {to}")]
    CoarseningUnsupported { from: i32, to: i32 },

    #[error("offset {0} is not representable on a grid of resolution {1}")]
    NotRepresentable(String, i32),

    #[error("bad frequency grid: {0} points (need an even count >= 2)")]
    BadGrid(usize),

    #[error("frequency grid of {points} points is too coarse for an index span of {span}")]
    GridTooCoarse { points: usize, span: usize },

    #[error("z-transform evaluated at z = 0 with negative-power terms")]
    ZeroArgument,

    #[error("power spectrum has imaginary part {0:e}")]
    NonRealSpectrum(f64),

    #[error("spectrum lower bound {0:e} is below the degeneracy threshold")]
    DegenerateSpectrum(f64),

    #[error("filter is not admissible (residual {0:e})")]
    InadmissibleFilter(f64),

    #[error("shift family is not orthogonal (residual {0:e})")]
    NonOrthogonalFamily(f64),

    #[error("scaling function did not converge")]
    DegenerateBase,

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::InvalidData(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidData(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
