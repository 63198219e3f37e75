use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("region is empty")]
    EmptyRegion,
    #[error("region is unbounded")]
    UnboundedRegion,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("density spec does not match the set model: {0}")]
    SpecMismatch(String),
    #[error("unsupported sampler configuration: {0}")]
    UnsupportedSpec(String),
    #[error("rejection sampler exceeded {attempts} attempts")]
    SamplerStall { attempts: u64 },
    #[error("spherical density has no declared maximum")]
    MissingDensityBound,
    #[error("argument outside the valid domain: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
