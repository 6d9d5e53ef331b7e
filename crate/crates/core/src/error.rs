use thiserror::Error;

/// Errors produced by operators, iteration engines and instance generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter failed validation before any computation started.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// Factorization met a pivot below the singularity threshold. For
    /// resolvents this means the operator is not monotone (or λ is invalid).
    #[error("singular system: pivot {pivot:e} in column {column}")]
    Singular { column: usize, pivot: f64 },

    #[error("matrix is not positive definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    /// An inner solver stopped at its iteration cap before reaching tolerance.
    #[error("inner solver stopped after {iterations} iterations with mapping norm {achieved:e} (tolerance {tolerance:e})")]
    InnerSolverCap {
        iterations: usize,
        achieved: f64,
        tolerance: f64,
    },

    #[error("failed to parse instance: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures that come from the numerics rather than from the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::NotPositiveDefinite { .. } | Error::InnerSolverCap { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
