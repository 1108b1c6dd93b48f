//! Error types for every layer of the pipeline.

use thiserror::Error;

use crate::contour::SixTuple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division is not exact in the Laurent ring")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("x{var} is specialized to 0 but appears with a negative exponent")]
    ZeroDenominator { var: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("vertex {0} is outside 1..=6")]
    BadVertex(usize),
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),
    #[error("seed text: {0}")]
    Parse(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("no lattice point within window {window} carries this cluster variable")]
    NotFound { window: i64 },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("{0} does not close up")]
    NotClosed(SixTuple),
    #[error("{0} is self-intersecting")]
    SelfIntersecting(SixTuple),
    #[error("{contour} needs a window of radius {needed}, have {radius}")]
    WindowTooSmall {
        contour: SixTuple,
        needed: i64,
        radius: i64,
    },
    #[error("{contour}: {run} consecutive zero sides between positive sides is not a supported pattern")]
    UnsupportedZeroRun { contour: SixTuple, run: usize },
    #[error("the graph has no perfect matching")]
    NoPerfectMatching,
    #[error("side {side} has no special point {index} (length {length})")]
    IndexOutOfRange { side: char, index: usize, length: i64 },
    #[error("vertex is not in the subgraph")]
    MissingVertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimerError {
    #[error("matching budget {budget} exceeded after {partial} matchings")]
    BudgetExceeded { budget: u64, partial: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("contour {0} is self-intersecting; skipped")]
    SkippedSelfIntersecting(SixTuple),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}
