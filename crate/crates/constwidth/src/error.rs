//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("direction grid is not symmetric (u in grid does not imply -u in grid)")]
    AsymmetricGrid,

    #[error("origin is not an interior point of the body")]
    OriginNotInterior,

    #[error("body is unbounded in the queried direction")]
    UnboundedDirection,

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("empty intersection: no certified interior point")]
    EmptyIntersection,

    #[error("arc partition does not close up (residual {residual:.3e})")]
    NonClosingPartition { residual: f64 },

    #[error("slice at height eta={eta} is empty")]
    EmptySlice { eta: f64 },

    #[error("{op}: requested tolerance {needed:.3e} not reached (achieved {achieved:.3e})")]
    ToleranceFailure {
        op: &'static str,
        achieved: f64,
        needed: f64,
    },

    #[error("{op} did not converge: {achieved:.3e} after {iterations} iterations (target {needed:.3e})")]
    NonConvergence {
        op: &'static str,
        achieved: f64,
        needed: f64,
        iterations: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!(
            "{} (line {}, column {})",
            e,
            e.line(),
            e.column()
        ))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
