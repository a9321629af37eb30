use thiserror::Error;

use crate::corpus::{TweetId, UserId};
use crate::sentiment::EmotionClass;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("lexicon line {line}: {msg}")]
    Lexicon { line: usize, msg: String },

    #[error("event log line {line}: {msg}")]
    EventLog { line: usize, msg: String },

    #[error("follow graph line {line}: {msg}")]
    Graph { line: usize, msg: String },

    #[error("duplicate tweet id {0}")]
    DuplicateTweetId(TweetId),

    #[error("unknown user {0}")]
    UnknownUser(UserId),

    #[error("tweet {0} not present in dataset")]
    UnknownTweet(TweetId),

    #[error("no sentiment class for tweet {0}")]
    MissingClass(TweetId),

    #[error("history for tweet {0} has no stimuli")]
    EmptyHistory(TweetId),

    #[error("stimulus bucket is empty")]
    EmptyBucket,

    #[error("sample is empty")]
    EmptySample,

    #[error("no histories with response class {0}")]
    EmptyGroup(EmotionClass),

    #[error("stimulus valence {0} outside [-1, 1]")]
    ValenceOutOfRange(f64),

    #[error("need at least {needed} usable points, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("population of {population} users is too small for threshold {threshold_pct}")]
    PopulationTooSmall { population: usize, threshold_pct: f64 },

    #[error("user class has no susceptible tweets")]
    EmptyClass,

    #[error("invalid proportions: {0}")]
    InvalidProportions(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
