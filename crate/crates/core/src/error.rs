use thiserror::Error;

use crate::nash::NashClustering;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("state budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("action requested on a terminal state")]
    TerminalState,

    #[error("nash clustering failed after {} clusters: {source}", partial.clusters.len())]
    Clustering {
        partial: Box<NashClustering>,
        source: Box<Error>,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures that come from resource limits or numerical solvers
    /// rather than malformed input.
    pub fn is_budget_or_solver(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::NonConvergence(_) | Error::Clustering { .. }
        )
    }
}
