use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("asymmetric connectivity between `{0}` and `{1}`")]
    AsymmetricEdge(String, String),
    #[error("connectivity row of `{0}` sums to more than one")]
    RowSumExceedsOne(String),
    #[error("connectivity graph is not connected")]
    DisconnectedGraph,
    #[error("edge refers to unknown state `{0}`")]
    UnknownStateInEdge(String),
    #[error("energy `{0}` is not representable at the configured scale")]
    ScaleOverflow(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state set is empty")]
    EmptySet,
    #[error("state index {0} does not belong to the landscape")]
    ForeignState(usize),
    #[error("inverse temperature must be positive, got {0}")]
    NonpositiveBeta(f64),
    #[error("level lies below the energy of the starting state")]
    LevelBelowStart,
    #[error("set is not a path cycle")]
    NotACycle,
    #[error("set is not a class of this partition level")]
    UnknownClass,
    #[error("partition is already the whole state space")]
    AlreadyTerminal,
    #[error("decomposition did not reach the whole space within {0} iterations")]
    NonTermination(usize),
    #[error("landscape has {0} states; the exhaustive oracle is limited to {1}")]
    TooLarge(usize, usize),
    #[error("invalid initial cost function: {0}")]
    InvalidSeedCost(String),

    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
    #[error("state lies outside the cycle")]
    StateOutsideCycle,
}

impl Error {
    /// Stable name of the error kind, e.g. `RowSumExceedsOne`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedInput(_) => "MalformedInput",
            Error::DuplicateState(_) => "DuplicateState",
            Error::AsymmetricEdge(..) => "AsymmetricEdge",
            Error::RowSumExceedsOne(_) => "RowSumExceedsOne",
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::UnknownStateInEdge(_) => "UnknownStateInEdge",
            Error::ScaleOverflow(_) => "ScaleOverflow",
            Error::UnknownState(_) => "UnknownState",
            Error::EmptySet => "EmptySet",
            Error::ForeignState(_) => "ForeignState",
            Error::NonpositiveBeta(_) => "NonpositiveBeta",
            Error::LevelBelowStart => "LevelBelowStart",
            Error::NotACycle => "NotACycle",
            Error::UnknownClass => "UnknownClass",
            Error::AlreadyTerminal => "AlreadyTerminal",
            Error::NonTermination(_) => "NonTermination",
            Error::TooLarge(..) => "TooLarge",
            Error::InvalidSeedCost(_) => "InvalidSeedCost",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::StateOutsideCycle => "StateOutsideCycle",
        }
    }

    /// Whether the error comes from validating a landscape document.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::MalformedInput(_)
                | Error::DuplicateState(_)
                | Error::AsymmetricEdge(..)
                | Error::RowSumExceedsOne(_)
                | Error::DisconnectedGraph
                | Error::UnknownStateInEdge(_)
                | Error::ScaleOverflow(_)
        )
    }
}
