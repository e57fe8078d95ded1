use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpucError {
    #[error("coefficient modulus {0} exceeds 1")]
    CoefficientOutsideDisk(f64),
    #[error("coefficient of modulus 1 before the final position encodes a trivial measure")]
    InteriorUnimodular,
    #[error("deformed coefficient equal to 1 makes the phase product singular")]
    SingularInput,
    #[error("final coefficient must be unimodular, |alpha| = {0}")]
    InvalidFinalCoefficient(f64),
    #[error("moment matrix is not positive definite at step {0}; measure is trivial or invalid")]
    MomentsNotPositiveDefinite(usize),
    #[error("evaluation point must satisfy |z| < 1, got |z| = {0}")]
    OutsideDisk(f64),
    #[error("polynomial degree {0} exceeds cap {1}")]
    DegreeCap(usize, usize),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("coefficient sequence has kind {found}, expected {expected}; convert explicitly")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("radial limit did not converge: {0}")]
    RadialLimit(String),
    #[error("numerical linear algebra failure: {0}")]
    Linalg(String),
    #[error("matrix ball element has singular value {0} > 1")]
    OutsideMatrixBall(f64),
    #[error("sampler diagnostics tripped: {0}")]
    SamplerWarning(String),
    #[error("invalid measure specification: {0}")]
    InvalidSpec(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, OpucError>;
