use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("region is empty")]
    EmptyRegion,
    #[error("operation needs an exact (polyhedral) region")]
    OracleUnsupported,
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("point is not a member of the set")]
    NotMember,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("face-pair enumeration exceeds the cap ({count} > {cap})")]
    FaceCap { count: usize, cap: usize },
    #[error("soundness violation: {0}")]
    Soundness(String),
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

impl Error {
    /// Short label used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::EmptyRegion => "empty_region",
            Error::OracleUnsupported => "oracle_unsupported",
            Error::InvalidNorm(_) => "invalid_norm",
            Error::NotMember => "not_member",
            Error::Precondition(_) => "precondition",
            Error::DimensionCap { .. } => "dimension_cap",
            Error::FaceCap { .. } => "face_cap",
            Error::Soundness(_) => "soundness",
            Error::Input(_) => "input",
        }
    }
}
