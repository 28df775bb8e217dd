use thiserror::Error;

/// Errors produced by the shuffle-poset engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid shuffle word: {0}")]
    InvalidWord(String),

    #[error("cannot parse letter `{0}`")]
    BadLetter(String),

    #[error("{0} is not below {1}")]
    NotComparable(String, String),

    #[error("cover relation is not graded at {0}")]
    NotGraded(String),

    #[error("poset has {0} maximal elements, expected a unique top")]
    MultipleMaximal(usize),

    #[error("poset has {0} minimal elements, expected a unique bottom")]
    MultipleMinimal(usize),

    #[error("rank {rank} is out of range for a poset of rank {height}")]
    RankOutOfRange { rank: usize, height: usize },

    #[error("not a maximal chain: {0}")]
    NotAChain(String),

    #[error("label sequence cannot be decoded: {0}")]
    NotDecodable(String),

    #[error("poset too large for this operation ({size} > {limit})")]
    TooLarge { size: usize, limit: usize },

    #[error("inconsistent shuffle type: {0}")]
    InconsistentType(String),

    #[error("series has no reciprocal: constant term is zero")]
    NotInvertible,

    #[error("truncation mismatch: {0:?} vs {1:?}")]
    TruncationMismatch((usize, usize), (usize, usize)),

    #[error("missing character value for class {0:?}")]
    MissingClass(Vec<usize>),

    #[error("word is not in the alternating language: {0}")]
    NotInLanguage(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
