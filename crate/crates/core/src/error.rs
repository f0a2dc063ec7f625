use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("norm computation failed")]
    NormFailed,

    #[error("singular or near-singular matrix (pivot {pivot:.3e} below {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("eigenvalue iteration stalled after {iterations} iterations")]
    EigenStalled { iterations: usize },

    #[error("eigenvalue certification failed: backward error {backward_error:.3e} exceeds {limit:.3e}")]
    EigenCertification { backward_error: f64, limit: f64 },

    #[error("not a projection: idempotence defect {defect:.3e} exceeds {limit:.3e}")]
    NotProjection { defect: f64, limit: f64 },

    #[error("exponential overflow")]
    ExpOverflow,

    #[error("resolvent pole at lambda = {lambda}")]
    ResolventPole { lambda: Complex64 },

    #[error("lambda inside exclusion disks: lambda = {lambda}, radius = {radius}")]
    InsideExclusionDisks { lambda: Complex64, radius: f64 },

    #[error("Neumann ratio not contractive: q = {ratio}")]
    NeumannNotContractive { ratio: f64 },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("quadrature not converged: difference {difference:.3e} at {nodes} nodes")]
    QuadratureNotConverged { difference: f64, nodes: usize },

    #[error("contour does not encircle spectrum: eigenvalue {eigenvalue} too close to or outside the circle")]
    SpectrumNotEnclosed { eigenvalue: Complex64 },

    #[error("circles intersect: |z| = {abs_z} is not larger than 2R = {two_r}")]
    CirclesIntersect { abs_z: f64, two_r: f64 },

    #[error("delta insufficient: R = {big_r} does not exceed the spectral radius {spectral_radius} of QAQ")]
    DeltaInsufficient { big_r: f64, spectral_radius: f64 },

    #[error("invalid time window [{t1}, {t2}]")]
    InvalidTimeWindow { t1: f64, t2: f64 },

    #[error("z not in validity region: z = {z}, need Re z < {limit}")]
    OutsideValidityRegion { z: Complex64, limit: f64 },

    #[error("t outside window: t = {t}, window [{t1}, {t2}]")]
    TimeOutsideWindow { t: f64, t1: f64, t2: f64 },

    #[error("too many product factors: k = {k} exceeds {max}")]
    TooManyFactors { k: u64, max: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
