use thiserror::Error;

/// Error type shared by all numeric modules.
#[derive(Debug, Error)]
pub enum Error {
    /// An iterative scheme failed to reach the requested agreement.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// An argument lies outside the admissible domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A half-measure was requested over an empty integration range.
    #[error("empty integration region")]
    EmptyRegion,

    /// The isogeny denominator vanishes at the given point.
    #[error("point lies in the isogeny kernel")]
    KernelPoint,

    /// Real coordinates were demanded where the defining radicals are imaginary.
    #[error("region error: {0}")]
    RegionError(String),

    /// Bad precision-context parameters.
    #[error("invalid precision context: {0}")]
    InvalidPrecision(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed coefficient cache file.
    #[error("cache parse error: {0}")]
    CacheParse(String),
}
