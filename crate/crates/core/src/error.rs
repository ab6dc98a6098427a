use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The graph has an isolated vertex, so no edge cover exists.
    #[error("no edge cover exists: vertex {vertex} is isolated")]
    NoCoverExists { vertex: usize },

    /// A construction produced an empty hyperedge, which cannot be
    /// normalized and therefore does not yield a contextuality scenario.
    #[error("empty hyperedge: {0}")]
    EmptyHyperedge(String),

    /// A scenario failed structural validation.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// An enumeration exceeded its work budget. The partial state is
    /// discarded; callers must re-run with a larger budget.
    #[error("budget exceeded after {spent} expansions (limit {limit})")]
    BudgetExceeded { spent: u64, limit: u64 },

    /// The weighted max-predictability is undefined because the scenario
    /// admits a deterministic model.
    #[error("beta is undefined: the scenario is KS-colourable")]
    UndefinedBeta,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
