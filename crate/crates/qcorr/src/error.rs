//! Error type shared by every module, with a stable mapping onto process exit
//! classes: input/validation problems versus numerical failures.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QcorrError {
    #[error("quantile level must lie strictly inside (0,1), got {0}")]
    InvalidQuantileLevel(f64),
    #[error("series must contain at least one observation")]
    EmptySeries,
    #[error("non-finite value at position {0}")]
    NonFinite(usize),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("series too short: need at least {need} observations, got {got}")]
    SeriesTooShort { need: usize, got: usize },
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error(
        "quantile regression exhausted its budget of {budget} iterations \
         (remaining duality gap {gap:.3e})"
    )]
    NonConvergence { budget: usize, gap: f64 },
    #[error("kernel window degenerated to zero total weight")]
    DegenerateWindow,
    #[error("zero sample variance in {0}")]
    ZeroVariance(&'static str),
    #[error("bandwidth {h} pushes tau = {tau} outside (0,1) even after clamping")]
    BandwidthTooLarge { tau: f64, h: f64 },
    #[error("autoregressive coefficients define a non-stationary recursion")]
    NonStationary,
    #[error("portmanteau degrees of freedom K - p must be >= 1, got K = {k}, p = {p}")]
    DegreesOfFreedom { k: usize, p: usize },
    #[error("parse error at data row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error("log return requires strictly positive prices; data row {row} has {value}")]
    NonPositivePrice { row: usize, value: f64 },
    #[error("{0}")]
    InvalidInput(String),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QcorrError>;

impl QcorrError {
    /// Process exit code class: 2 for input/validation errors, 3 for failures
    /// that arise inside a numerical procedure.
    pub fn exit_code(&self) -> i32 {
        match self {
            QcorrError::RankDeficient
            | QcorrError::NonConvergence { .. }
            | QcorrError::DegenerateWindow
            | QcorrError::ZeroVariance(_) => 3,
            _ => 2,
        }
    }
}
