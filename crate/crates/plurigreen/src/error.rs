use alloc::string::String;

/// Errors surfaced by the bound machinery.
///
/// `SoundnessViolation` is fatal by design: a certified lower bound above a
/// certified upper bound means a bug in a witness, not numerical noise.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: domain is {expected}-dimensional, point is {got}-dimensional")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lies outside the domain (margin {margin})")]
    OutsideDomain { margin: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("soundness violation: certified lo {lo} exceeds certified hi {hi}")]
    SoundnessViolation { lo: f64, hi: f64 },
    #[error("no feasible witness found within budget: {0}")]
    Infeasible(String),
    #[error("root localization inconclusive: {0}")]
    RootsInconclusive(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("unsupported domain for this operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;
