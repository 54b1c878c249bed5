use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty permutation")]
    EmptyPermutation,
    #[error("duplicate value {0}")]
    DuplicateValue(usize),
    #[error("value {value} out of range 1..={n}")]
    ValueOutOfRange { value: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("{what} = {value} out of range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("site {site} holds {count} chip(s), at least 2 are needed to topple")]
    TooFewChips { site: usize, count: usize },
    #[error("chip {chip} is not at site {site}")]
    ChipNotAtSite { chip: usize, site: usize },
    #[error("permutation is not decomposable at split {0}")]
    NotDecomposable(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("class ({i},{j}) is not constant: fiber sizes {a} and {b}")]
    ClassNotConstant { i: usize, j: usize, a: u64, b: u64 },
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("configuration topples to {actual}, not {expected}")]
    ResultantMismatch { expected: String, actual: String },
    #[error("permutation is not ({k},{n})-Vesztergombi")]
    NotVesztergombi { k: usize, n: usize },
    #[error("word is not ({u},{o})-Callan")]
    NotCallan { u: usize, o: usize },
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
        if value < min || value > max {
            Err(Error::OutOfRange {
                what,
                value,
                min,
                max,
            })
        } else {
            Ok(())
        }
    }
}
