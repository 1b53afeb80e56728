use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the numerical layers and the batch driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value out of floating range at degree {k}")]
    Range { k: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("series degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("quadrature grid supports degree {supported}, series needs {needed}")]
    GridTooCoarse { supported: usize, needed: usize },

    #[error("lattice has {count} points, limit is {limit}")]
    LatticeTooLarge { count: usize, limit: usize },

    #[error("linear solve failed: {0}")]
    SolverFailure(String),

    #[error("series diverges: partial sums exceeded {threshold:e}")]
    Divergence { threshold: f64 },

    #[error("empty test set")]
    EmptyTestSet,

    #[error("candidate form is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("pole: |1 - conj(a) z| = {0:e}")]
    Pole(f64),

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
