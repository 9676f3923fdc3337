use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not h-symmetric (J-commutator {commutator:.3e}, g-asymmetry {asymmetry:.3e})")]
    NotHSymmetric { commutator: f64, asymmetry: f64 },

    #[error("operator is not h-diagonalizable: {0}")]
    NotHDiagonalizable(String),

    #[error("eigenvalue computation did not converge")]
    EigenFailure,

    #[error("degenerate plane: |pi1(x,y,y,x)| = {value:.3e} below threshold {threshold:.3e}")]
    DegeneratePlane { value: f64, threshold: f64 },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("at least {needed} planes are required, got {found}")]
    TooFewPlanes { needed: usize, found: usize },

    #[error("every supplied plane is degenerate")]
    AllPlanesDegenerate,

    #[error("isotropic h-sphere parameters: (a, b) = (0, 0)")]
    IsotropicParameters,

    #[error("zero curvatures describe a holomorphic hyperplane, not an h-sphere")]
    ZeroCurvatures,

    #[error("ambient real dimension {0} is too small")]
    AmbientTooSmall(usize),

    #[error("sampling gave up after {0} rejections")]
    SamplingExhausted(usize),

    #[error("point is not on the surface (residual {0:.3e})")]
    PointNotOnSurface(f64),

    #[error("normal vector is not normalized: {0}")]
    BadInputNormalization(String),

    #[error("Gram-Schmidt under the complex bilinear form failed after {0} attempts")]
    GramSchmidtFailure(usize),

    #[error("finite-difference step {step:.3e} is below {limit:.3e}")]
    StepTooSmall { step: f64, limit: f64 },

    #[error("finite-difference step {step:.3e} exceeds {limit:.3e}")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("projection onto the surface failed: {0}")]
    ProjectionFailure(String),

    #[error("vector is not normal to the surface (residual {0:.3e})")]
    NotNormal(f64),

    #[error("malformed sample: {0}")]
    MalformedSample(String),

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("at least two h-proper pairs are required")]
    TooFewPairs,

    #[error("lambda^2 + mu^2 = {0:.3e} is too small for sphere reconstruction")]
    NearZeroLambdaMu(f64),

    #[error("normal field is not constant (spread {0:.3e})")]
    NonConstantNormal(f64),

    #[error("invalid file: {0}")]
    InvalidFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
