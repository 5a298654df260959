use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("half-dimension n must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("ambient half-dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("degree {degree} is out of range for n = {n}")]
    DegreeOutOfRange { degree: usize, n: usize },
    #[error("expected {expected} vectors, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("interior product of a degree-0 form")]
    ContractionOfScalar,
    #[error("invalid multi-index {indices:?}: {reason}")]
    InvalidIndex { indices: Vec<usize>, reason: String },
    #[error("invalid scalar {text:?}: {reason}")]
    InvalidScalar { text: String, reason: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("map is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("map does not preserve the volume form: {0}")]
    NotVolumePreserving(String),
    #[error("incompatible triple: {0}")]
    IncompatibleTriple(String),
    #[error("2-form is degenerate (its top power vanishes)")]
    DegenerateForm,
    #[error("2-form is proportional to the symplectic form")]
    ProportionalToOmega,
    #[error("singular matrix")]
    Singular,
    #[error("schema error at {location}: {reason}")]
    Schema { location: String, reason: String },
}

impl Error {
    pub(crate) fn schema(location: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            reason: reason.into(),
        }
    }
}
