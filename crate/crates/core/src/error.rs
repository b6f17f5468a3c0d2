use thiserror::Error;

use crate::audit::Violation;
use crate::decompose::HallViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed edge-list document.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Arguments that break an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// A peel step could not saturate its high out-degree vertices, which
    /// certifies that the supplied density bound is below the true maximum.
    #[error("density bound violated: {0}")]
    DensityViolation(Box<HallViolation>),

    /// Enumeration stopped after visiting `budget` candidates.
    #[error("search budget of {budget} candidates exhausted ({} violations found so far)", partial.len())]
    BudgetExceeded {
        budget: u64,
        partial: Vec<Violation>,
    },

    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
