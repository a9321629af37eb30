//! Detect and quantify emotional contagion in timestamped social-post
//! streams.
//!
//! The pipeline, end to end:
//!
//! 1. [`sentiment`] scores each post with a lexicon-rule engine, producing
//!    dual 1..=5 strengths, a signed polarity, and a three-way emotion class.
//! 2. [`corpus`] ingests event logs and the follow graph, filters eligible
//!    posts, and reconstructs each post's one-hour exposure history over the
//!    author's followees.
//! 3. [`null_model`] pools all stimuli into one bucket, redraws a baseline
//!    that preserves history sizes but destroys stimulus-response coupling,
//!    and compares conditional stimulus distributions against it
//!    (over-exposure deltas, Mann-Whitney ranks).
//! 4. [`valence`] bins stimulus valences and fits the linear
//!    stimulus-to-response valence relationship.
//! 5. [`susceptibility`] attributes individual tweets to contagion via
//!    nearest-profile matching, summarizes users by their susceptible
//!    fraction, and contrasts the high and low tails.
//! 6. [`synthgen`] generates synthetic worlds with known contagion strength
//!    and homophily so the whole measurement chain can be validated against
//!    ground truth.
//!
//! ```
//! use contagion_core::sentiment::Lexicon;
//!
//! let lexicon = Lexicon::bundled();
//! let score = lexicon.score("not bad at all :)");
//! assert_eq!(score.polarity().value(), 1);
//! ```

pub mod corpus;
pub mod error;
pub mod null_model;
pub mod report;
pub mod seeds;
pub mod sentiment;
pub mod susceptibility;
pub mod synthgen;
pub mod valence;

pub use error::{Error, Result};
pub use sentiment::{EmotionClass, Lexicon, Polarity, SentimentScore};

use corpus::Dataset;
use null_model::ClassMap;

/// Score every record of a dataset and map tweet ids to emotion classes.
pub fn classify_dataset(dataset: &Dataset, lexicon: &Lexicon) -> ClassMap {
    dataset
        .records()
        .iter()
        .map(|r| (r.tweet_id.clone(), lexicon.score(&r.text).polarity().classify()))
        .collect()
}
