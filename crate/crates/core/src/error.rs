use thiserror::Error;

/// Errors raised by the state, operator and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate angle theta = {theta}: must lie strictly inside (0, pi/2)")]
    DegenerateAngle { theta: f64 },

    #[error("overlap diverges (|det| = {det:.3e}): both kets are delta-normalized along a shared quadrature")]
    DivergentOverlap { det: f64 },

    #[error("invalid Gaussian ket: {0}")]
    InvalidKet(String),

    #[error("scale factor must be nonzero")]
    ZeroFactor,

    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    #[error("state norm vanishes ({norm:.3e})")]
    ZeroNorm { norm: f64 },

    #[error("exponential series did not converge within {order} terms (last term norm {tail:.3e})")]
    NonConvergentSeries { order: usize, tail: f64 },

    #[error("grid too coarse: halving the step changed the deviation by {change:.3e}")]
    GridTooCoarse { change: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
