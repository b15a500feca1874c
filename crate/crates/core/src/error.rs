use thiserror::Error;

/// Errors produced by the smoothing routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum KsError {
    #[error("matrix is not positive definite (h11={h11}, h12={h12}, h22={h22})")]
    NotPositiveDefinite { h11: f64, h12: f64, h22: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("non-finite value in input: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("objective became non-finite during minimisation")]
    NonFiniteObjective,

    #[error("kernel weights underflowed to zero")]
    NumericalUnderflow,

    #[error("classifier needs at least 2 classes, got {0}")]
    TooFewClasses(usize),

    #[error("class {label:?} has {got} points, need at least {needed}")]
    TooFewPointsInClass {
        label: String,
        needed: usize,
        got: usize,
    },

    #[error("thin={thin} exceeds grid dimension {dim}")]
    ThinTooLarge { thin: usize, dim: usize },

    #[error("invalid contour level {0}")]
    InvalidLevel(f64),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("missing column {0:?}")]
    MissingColumn(String),

    #[error("no usable rows after filtering")]
    EmptyAfterFiltering,

    #[error("I/O failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, KsError>;

impl From<std::io::Error> for KsError {
    fn from(e: std::io::Error) -> Self {
        KsError::Io(e.to_string())
    }
}
