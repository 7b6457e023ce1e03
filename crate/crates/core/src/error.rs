use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("evaluation within the exclusion radius of center {index}")]
    EvaluationAtCenter { index: usize },
    #[error("potential is not positive at the evaluation point (phi = {phi})")]
    NonpositivePhi { phi: f64 },
    #[error("critical point is degenerate (smallest |eigenvalue| = {smallest})")]
    DegenerateCritical { smallest: f64 },
    #[error("configuration has no critical points")]
    NoCriticalPoints,
    #[error("a degenerate critical point is present")]
    DegeneratePresent,
    #[error("integration step underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("point is neither a center nor a critical point")]
    NotRestPoint,
    #[error("time {t} is past extinction time {extinction}")]
    PastExtinction { t: f64, extinction: f64 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("curve is not almost calibrated (grading variation {variation})")]
    NotAlmostCalibrated { variation: f64 },
    #[error("curve curvature changes sign, so it does not bound a convex region")]
    NotPerfectMorse,
    #[error("could not find a non-degenerate cut-ray system after {attempts} attempts")]
    RayDegeneracy { attempts: usize },
    #[error("chord between centers {i} and {j} passes through center {through}")]
    ChordThroughCenter { i: usize, j: usize, through: usize },
    #[error("operation not supported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
