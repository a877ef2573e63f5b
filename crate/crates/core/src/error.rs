use std::fmt;

use thiserror::Error;

/// Which half of a two-sided bracketing comparison hit an exact tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exponent a_{index} is not an integer (a_{prev} is not a perfect {root}-th power)", prev = index - 1)]
    NonIntegralExponent { index: usize, root: u64 },

    #[error("exponent a_{index} exceeds the budget of 2^{budget_bits}")]
    ExponentBudgetExceeded { index: usize, budget_bits: u32 },

    #[error("cannot reach {digits} decimal places within the exponent budget")]
    PrecisionUnattainable { digits: usize },

    #[error("enclosure depth {depth} is insufficient at n = {n}")]
    InsufficientDepth { n: usize, depth: usize },

    #[error("no index n <= {n_max} satisfies the condition")]
    NotFound { n_max: usize },

    #[error("exact equality in the {side} comparison at n = {n}")]
    TieEncountered { n: usize, side: Side },

    #[error("polynomial has no sign change over the bracket")]
    NoSignChange,

    #[error("quotient bounds are only established for n >= 2 (got n = {n})")]
    QuotientIndexRestricted { n: usize },
}

impl Error {
    /// True for errors caused by the exponent budget or requested precision.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ExponentBudgetExceeded { .. }
                | Error::PrecisionUnattainable { .. }
                | Error::InsufficientDepth { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
