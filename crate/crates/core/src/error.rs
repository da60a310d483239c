use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A requested word length is not determined by the supplied data.
    #[error("requested length {requested} exceeds the {available} symbols determined by the continued fraction")]
    Length { requested: usize, available: usize },

    /// A value fell outside the interval an operation works on.
    #[error("value out of range: {0}")]
    Range(String),

    /// A computation ran out of its step or state budget.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// An orbit did not close up within the step budget.
    #[error("orbit did not repeat within {} steps", partial.len())]
    OrbitBudget { partial: Vec<crate::exact::Rational> },

    /// Entropy requested for an automaton with no infinite paths.
    #[error("entropy undefined: automaton has no live states")]
    EntropyUndefined,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
