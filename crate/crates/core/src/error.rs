use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{what} has size {size}, above the cap {cap}")]
    BudgetExceeded {
        what: String,
        size: u128,
        cap: u128,
    },

    #[error("objects belong to different {0}")]
    Mismatch(&'static str),

    #[error("subset is not a subgroup: witness ({0}, {1}) leaves the subset")]
    NotSubgroup(usize, usize),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// An object of `size` over the allowed `cap`.
    pub fn budget(what: impl Into<String>, size: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            size: size.into(),
            cap: cap.into(),
        }
    }

    /// True for the budget/cap family of errors.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
