use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("capacity exceeded: {what} = {count} > limit {limit}")]
    Capacity {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("not a flat: {0:?}")]
    NotAFlat(Vec<usize>),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("precondition failed: {0}")]
    InfeasiblePrecondition(String),

    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("elements belong to different Chow rings")]
    RingMismatch,

    #[error("class is not integral in the alpha_F basis")]
    NonIntegral,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "PARSE",
            Error::Capacity { .. } => "CAPACITY",
            Error::NotAFlat(_) => "NOT_A_FLAT",
            Error::Rank(_) => "RANK",
            Error::InfeasiblePrecondition(_) => "INFEASIBLE_PRECONDITION",
            Error::InvalidMatroid(_) | Error::InvalidArgument(_) | Error::NonIntegral => {
                "INFEASIBLE_PRECONDITION"
            }
            Error::RingMismatch | Error::Internal(_) => "INTERNAL",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
