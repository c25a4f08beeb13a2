use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unimodular: |det - 1| = {0:e}")]
    InvalidMatrix(f64),
    #[error("matrix is not in SU(2): residual {0:e}")]
    NotSu2(f64),
    #[error("point lies on the wrong sheet of the hyperboloid (x0 = {0})")]
    WrongSheet(f64),
    #[error("invalid hermitian point: {0}")]
    InvalidPoint(String),
    #[error("central element has no rotation axis")]
    NoAxis,
    #[error("singular point at z = {0}")]
    SingularPoint(String),
    #[error("normal vector is not a unit vector (|v| = {0})")]
    NonUnitNormal(f64),
    #[error("path error: {0}")]
    Path(String),
    #[error("step size underflow near z = {0}")]
    StepUnderflow(String),
    #[error("integration accuracy insufficient: {0}")]
    Accuracy(String),
    #[error("infinite density at z = {0}")]
    InfiniteDensity(String),
    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("unknown loop `{0}`")]
    UnknownLoop(String),
    #[error("outside the validity range: {0}")]
    OutsideValidity(String),
    #[error("normalization impossible: {0}")]
    NoNormalization(String),
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("singular jacobian")]
    SingularJacobian,
    #[error("reflection word must have even length, got {0}")]
    OddWord(usize),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("branch tracking failed: {0}")]
    BranchFailure(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
