use symcore::SymError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum DworkError {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("intersection matrix: antidiagonal {antidiagonal}: {reason}")]
    OmegaInconsistent { antidiagonal: usize, reason: String },
    #[error("elimination stuck at equation ({i},{j}): {reason}")]
    EliminationStuck { i: usize, j: usize, reason: String },
    #[error("no such vector field: {0}")]
    NoSuchField(String),
    #[error("sl2 relation {0} fails")]
    Sl2Violation(String),
    #[error("not a member: entry ({i},{j}) = {value}")]
    NotMember { i: usize, j: usize, value: String },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("multiplicative parameter {0} is zero")]
    ZeroScalar(usize),
    #[error("action shape violation: {0}")]
    ActionShapeViolation(String),
}

impl DworkError {
    /// Structural failures are the designated outcomes of the extrapolation
    /// probe; everything else is a bug or bad input.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            DworkError::OmegaInconsistent { .. }
                | DworkError::EliminationStuck { .. }
                | DworkError::NoSuchField(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, DworkError>;
