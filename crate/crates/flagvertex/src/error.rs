//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Pochhammer factor, bracket denominator or rational coefficient vanished.
    #[error("pole: {0}")]
    Pole(String),
    /// Canonical phi rewriting produced a factor `(1 - m)^{-1}` with `m = 1`.
    #[error("rewrite pole: {0}")]
    RewritePole(String),
    /// Series with incompatible grading.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// Argument outside its admissible range.
    #[error("range error: {0}")]
    Range(String),
    /// A comparison was requested beyond the reliable truncation order.
    #[error("reliability error: {0}")]
    Reliability(String),
    /// Sign-convention calibration did not single out one convention.
    #[error("calibration error: {0}")]
    Calibration(String),
    /// A coefficient diverges in the requested limit.
    #[error("limit error: {0}")]
    Limit(String),
    /// Invalid parameter point, flag data or configuration.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A linear system that must be invertible was singular.
    #[error("singular system: {0}")]
    SingularSystem(String),
    /// A vector expected on one weight block spans several.
    #[error("weight error: {0}")]
    Weight(String),
    /// The low-order fit of an identity has no solution.
    #[error("no fit: {0}")]
    NoFit(String),
    /// Bethe roots are zero or collide at one level.
    #[error("degenerate roots: {0}")]
    DegenerateRoot(String),
    /// Newton iteration failed to converge.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// Newton step hit a singular Jacobian.
    #[error("singular jacobian: {0}")]
    JacobianSingular(String),
    /// Expression parse failure.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that signal a non-generic parameter point.
    pub fn is_pole(&self) -> bool {
        matches!(self, Error::Pole(_) | Error::RewritePole(_))
    }
}
