use thiserror::Error;

/// Errors raised by the numerical kernels and the configuration layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate game: quantum value is zero")]
    DegenerateGame,

    #[error("gap too small to certify: no round count up to {cap} reaches significance")]
    Uncertifiable { cap: u64 },

    #[error("no finite memory lifetime suffices: static infidelity budget already exhausted")]
    NoFiniteLifetime,

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("target unreachable: {0}")]
    Infeasible(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
