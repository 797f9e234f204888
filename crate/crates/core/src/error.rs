use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("word length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("position {pos} out of range 1..={n}")]
    PositionOutOfRange { pos: usize, n: usize },

    #[error("position {0} is part of the determining set")]
    PositionInSet(usize),

    #[error("work budget exceeded: {what} needs {needed} checks, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid locality structure: {0}")]
    InvalidLocality(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("need at least two codewords, have {0}")]
    TooFewWords(usize),

    #[error("no locality map available; supply one explicitly")]
    MissingLocalityMap,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
