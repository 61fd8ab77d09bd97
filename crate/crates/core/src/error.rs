use thiserror::Error;

/// Errors produced by the numerical routines and the path/spec front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not skew-Hermitian (deviation {deviation:e})")]
    NotSkewHermitian { deviation: f64 },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not special unitary (unitarity {unitarity:e}, |det - 1| {det:e})")]
    NotSpecialUnitary { unitarity: f64, det: f64 },
    #[error("index {index} out of range {min}..={max}")]
    IndexOutOfRange { index: usize, min: usize, max: usize },
    #[error("no closed-form exponential for generator lambda_{0}")]
    UnsupportedGenerator(usize),
    #[error("algebra vector is not unit norm (|n| = {norm})")]
    NotUnitNorm { norm: f64 },
    #[error("finite-difference stencil t = {t} +/- h = {h} leaves [0, 1]")]
    StepOutOfRange { t: f64, h: f64 },
    #[error("{samples} samples requested, at least {min} required")]
    PathTooShort { samples: usize, min: usize },
    #[error("unsupported coordinate plane ({0}, {1})")]
    UnsupportedPlane(String, String),
    #[error("E1 == E3: no degenerate/nondegenerate split")]
    DegenerateSplit,
    #[error("path is not closed")]
    PathNotClosed,
    #[error("{segments} segments requested, at least {min} required")]
    TooFewSegments { segments: usize, min: usize },
    #[error("norm drift {drift:e} exceeds 1e-6; increase the step count")]
    StepCountTooLow { drift: f64 },
    #[error("levels {0:?} belong to different eigenvalues")]
    MixedLevels(Vec<usize>),
    #[error("levels {0:?} are a strict subset of a degenerate eigenspace")]
    PartialEigenspace(Vec<usize>),
    #[error("invalid level set: {0}")]
    InvalidLevels(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("overlap matrix is singular; the sweep is far from adiabatic")]
    SingularOverlap,
    #[error("spec error at {location}: {message}")]
    SpecParse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
