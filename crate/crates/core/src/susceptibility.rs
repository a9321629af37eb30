//! Per-tweet contagion attribution and per-user susceptibility.
//!
//! Each response tweet's observed stimulus distribution is matched to the
//! nearest of three baseline profiles (the average stimulus distributions
//! preceding negative, neutral, and positive responses). When the response
//! class equals the class of the nearest profile, the tweet counts as an
//! instance of susceptibility. Users are summarized by the fraction of their
//! tweets attributed this way, split into high/low classes by the tails of
//! that distribution, and characterized by how often their susceptible
//! tweets adopt positive versus negative emotions.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::corpus::{Dataset, ExposureHistory, UserId};
use crate::error::{Error, Result};
use crate::null_model::{ClassCounts, ClassMap, SentimentProportions};
use crate::sentiment::EmotionClass;
use crate::corpus::TweetId;

/// Distances closer than this are considered tied.
pub const DISTANCE_TIE_TOLERANCE: f64 = 1e-12;
/// Default fraction of users in each susceptibility tail.
pub const DEFAULT_THRESHOLD_PCT: f64 = 0.15;

/// The three baseline stimulus profiles, one per response class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineProfiles {
    b_neg: SentimentProportions,
    b_neu: SentimentProportions,
    b_pos: SentimentProportions,
}

impl BaselineProfiles {
    /// Profiles must be pairwise distinct, otherwise nearest-profile lookup
    /// degenerates.
    pub fn new(
        b_neg: SentimentProportions,
        b_neu: SentimentProportions,
        b_pos: SentimentProportions,
    ) -> Result<Self> {
        let pairs =
            [(&b_neg, &b_neu, "negative/neutral"), (&b_neg, &b_pos, "negative/positive"), (&b_neu, &b_pos, "neutral/positive")];
        for (a, b, which) in pairs {
            if a.distance(b) <= DISTANCE_TIE_TOLERANCE {
                return Err(Error::InvalidConfig(format!(
                    "baseline profiles {which} coincide"
                )));
            }
        }
        Ok(BaselineProfiles { b_neg, b_neu, b_pos })
    }

    /// Built-in reference profiles measured on a large public Twitter
    /// corpus. Corpus-specific analyses should recompute their own profiles
    /// from conditional distributions instead.
    pub fn reference() -> Self {
        BaselineProfiles {
            b_neg: SentimentProportions::normalized(21.63, 45.02, 33.35)
                .expect("reference profile"),
            b_neu: SentimentProportions::normalized(16.49, 48.95, 34.56)
                .expect("reference profile"),
            b_pos: SentimentProportions::normalized(16.00, 45.05, 38.94)
                .expect("reference profile"),
        }
    }

    pub fn profile(&self, class: EmotionClass) -> &SentimentProportions {
        match class {
            EmotionClass::Negative => &self.b_neg,
            EmotionClass::Neutral => &self.b_neu,
            EmotionClass::Positive => &self.b_pos,
        }
    }
}

/// The profile class nearest to an observed stimulus distribution.
///
/// Ties within [`DISTANCE_TIE_TOLERANCE`] resolve toward neutral when
/// neutral is among the tied profiles, otherwise toward negative (the
/// lexicographically smaller of the remaining pair).
pub fn nearest_profile(
    observed: &SentimentProportions,
    profiles: &BaselineProfiles,
) -> (EmotionClass, bool) {
    let distances: Vec<(EmotionClass, f64)> = EmotionClass::ALL
        .iter()
        .map(|&class| (class, observed.distance(profiles.profile(class))))
        .collect();
    let min_distance =
        distances.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);
    let tied: Vec<EmotionClass> = distances
        .iter()
        .filter(|&&(_, d)| d - min_distance <= DISTANCE_TIE_TOLERANCE)
        .map(|&(class, _)| class)
        .collect();
    let tie = tied.len() > 1;
    let chosen = if tied.contains(&EmotionClass::Neutral) && tie {
        EmotionClass::Neutral
    } else {
        // Canonical enum order puts Negative before Positive.
        *tied.first().expect("at least one profile is nearest")
    };
    (chosen, tie)
}

/// Contagion attribution for one response tweet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContagionLabel {
    pub tweet_id: TweetId,
    /// Class of the nearest baseline profile: what the user would post if
    /// they followed their stimuli.
    pub expected: EmotionClass,
    /// Class the user actually posted.
    pub actual: EmotionClass,
    pub susceptible: bool,
    pub tie: bool,
}

/// Label every history's target by comparing its stimulus distribution to
/// the profiles.
pub fn label_tweets(
    histories: &[ExposureHistory],
    classes: &ClassMap,
    profiles: &BaselineProfiles,
) -> Result<Vec<ContagionLabel>> {
    let mut labels = Vec::with_capacity(histories.len());
    for history in histories {
        if history.is_empty() {
            return Err(Error::EmptyHistory(history.target.clone()));
        }
        let actual = *classes
            .get(&history.target)
            .ok_or_else(|| Error::MissingClass(history.target.clone()))?;
        let mut counts = ClassCounts::new();
        for id in &history.stimuli {
            let class = classes.get(id).ok_or_else(|| Error::MissingClass(id.clone()))?;
            counts.add(*class);
        }
        let observed = counts.proportions().expect("non-empty history");
        let (expected, tie) = nearest_profile(&observed, profiles);
        labels.push(ContagionLabel {
            tweet_id: history.target.clone(),
            expected,
            actual,
            susceptible: expected == actual,
            tie,
        });
    }
    Ok(labels)
}

/// Per-user susceptibility summary.
#[derive(Debug, Clone, PartialEq)]
pub struct UserSusceptibility {
    pub user: UserId,
    /// Fraction of the user's labeled tweets attributed to contagion.
    pub fraction: f64,
    pub num_tweets: usize,
}

/// Aggregate labels into per-user susceptible fractions, sorted by user id.
pub fn user_fractions(
    labels: &[ContagionLabel],
    dataset: &Dataset,
) -> Result<Vec<UserSusceptibility>> {
    let mut per_user: BTreeMap<UserId, (usize, usize)> = BTreeMap::new();
    for label in labels {
        let author = dataset
            .author_of(&label.tweet_id)
            .ok_or_else(|| Error::UnknownTweet(label.tweet_id.clone()))?;
        let entry = per_user.entry(author.clone()).or_insert((0, 0));
        entry.1 += 1;
        if label.susceptible {
            entry.0 += 1;
        }
    }
    Ok(per_user
        .into_iter()
        .map(|(user, (susceptible, total))| UserSusceptibility {
            user,
            fraction: susceptible as f64 / total as f64,
            num_tweets: total,
        })
        .collect())
}

/// One bin of the susceptible-fraction histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionHistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    /// Cumulative fraction of users with fraction below `upper`.
    pub cumulative: f64,
}

/// Histogram of per-user fractions over [0, 1]; the last bin is closed.
pub fn fraction_histogram(
    fractions: &[UserSusceptibility],
    num_bins: usize,
) -> Result<Vec<FractionHistogramBin>> {
    if num_bins == 0 {
        return Err(Error::InvalidConfig("histogram needs at least one bin".into()));
    }
    let mut counts = vec![0usize; num_bins];
    for user in fractions {
        let idx =
            ((user.fraction * num_bins as f64).floor() as usize).min(num_bins - 1);
        counts[idx] += 1;
    }
    let total = fractions.len();
    let width = 1.0 / num_bins as f64;
    let mut cumulative = 0usize;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            cumulative += count;
            FractionHistogramBin {
                lower: i as f64 * width,
                upper: (i + 1) as f64 * width,
                count,
                cumulative: if total == 0 {
                    0.0
                } else {
                    cumulative as f64 / total as f64
                },
            }
        })
        .collect())
}

/// The high- and low-susceptibility user classes.
#[derive(Debug, Clone, PartialEq)]
pub struct SusceptibilityClasses {
    pub high: BTreeSet<UserId>,
    pub low: BTreeSet<UserId>,
    pub threshold_pct: f64,
}

/// Split users into the top and bottom `threshold_pct` tails of the
/// susceptible-fraction distribution.
///
/// Users sort by (fraction, user id), so boundary ties resolve
/// deterministically by id.
pub fn classify_users(
    fractions: &[UserSusceptibility],
    threshold_pct: f64,
) -> Result<SusceptibilityClasses> {
    if !(threshold_pct > 0.0 && threshold_pct <= 0.5) {
        return Err(Error::InvalidConfig(format!(
            "threshold_pct must be in (0, 0.5], got {threshold_pct}"
        )));
    }
    let population = fractions.len();
    if (population as f64) < 2.0 / threshold_pct {
        return Err(Error::PopulationTooSmall { population, threshold_pct });
    }
    let k = (threshold_pct * population as f64).round() as usize;
    if 2 * k > population {
        return Err(Error::PopulationTooSmall { population, threshold_pct });
    }
    let mut sorted: Vec<&UserSusceptibility> = fractions.iter().collect();
    sorted.sort_by(|a, b| {
        a.fraction
            .partial_cmp(&b.fraction)
            .expect("finite fractions")
            .then_with(|| a.user.cmp(&b.user))
    });
    let low = sorted[..k].iter().map(|u| u.user.clone()).collect();
    let high = sorted[population - k..].iter().map(|u| u.user.clone()).collect();
    Ok(SusceptibilityClasses { high, low, threshold_pct })
}

/// Average adoption rates over one user class.
#[derive(Debug, Clone, PartialEq)]
pub struct AdoptionRates {
    /// Mean per-user fraction of susceptible tweets that adopted a positive
    /// emotion.
    pub pos_rate: f64,
    /// Same for negative emotions.
    pub neg_rate: f64,
    /// pos_rate / neg_rate; `None` when neg_rate is zero.
    pub ratio: Option<f64>,
    /// Users that contributed (those with at least one susceptible tweet).
    pub num_users: usize,
}

/// Positive/negative adoption rates among the susceptible tweets of a user
/// class. Per-user rates are averaged across users; users without any
/// susceptible tweet cannot contribute a rate and are skipped.
pub fn adoption_rates(
    labels: &[ContagionLabel],
    dataset: &Dataset,
    class_users: &BTreeSet<UserId>,
) -> Result<AdoptionRates> {
    let mut per_user: BTreeMap<&UserId, (usize, usize, usize)> = BTreeMap::new();
    for label in labels {
        if !label.susceptible {
            continue;
        }
        let author = dataset
            .author_of(&label.tweet_id)
            .ok_or_else(|| Error::UnknownTweet(label.tweet_id.clone()))?;
        if !class_users.contains(author) {
            continue;
        }
        let entry = per_user.entry(author).or_insert((0, 0, 0));
        entry.2 += 1;
        match label.actual {
            EmotionClass::Positive => entry.0 += 1,
            EmotionClass::Negative => entry.1 += 1,
            EmotionClass::Neutral => {}
        }
    }
    if per_user.is_empty() {
        return Err(Error::EmptyClass);
    }
    let n = per_user.len() as f64;
    let pos_rate = per_user
        .values()
        .map(|&(pos, _, total)| pos as f64 / total as f64)
        .sum::<f64>()
        / n;
    let neg_rate = per_user
        .values()
        .map(|&(_, neg, total)| neg as f64 / total as f64)
        .sum::<f64>()
        / n;
    let ratio = if neg_rate > 0.0 { Some(pos_rate / neg_rate) } else { None };
    Ok(AdoptionRates { pos_rate, neg_rate, ratio, num_users: per_user.len() })
}
