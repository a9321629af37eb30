//! CSV serialization of analysis outputs.
//!
//! All writers emit rows in a deterministic order and format floats with
//! Rust's shortest round-trip representation, so identical inputs produce
//! byte-identical files.

use std::io::Write;

use crate::error::{Error, Result};
use crate::null_model::{BaselineResult, ConditionalDistribution, MannWhitney, Overexposure};
use crate::sentiment::{EmotionClass, SentimentScore};
use crate::susceptibility::{AdoptionRates, FractionHistogramBin, UserSusceptibility};
use crate::synthgen::GroundTruth;
use crate::valence::{LinearFit, StimulusResponseBin};
use crate::corpus::TweetId;

fn csv_writer<W: Write>(writer: W) -> csv::Writer<W> {
    csv::Writer::from_writer(writer)
}

fn write_record<W: Write>(
    w: &mut csv::Writer<W>,
    fields: &[&str],
) -> Result<()> {
    w.write_record(fields)
        .map_err(|e| Error::InvalidConfig(format!("csv write: {e}")))
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

/// `tweet_id, s_pos, s_neg, polarity, class` rows, one per scored tweet.
pub fn write_scores_csv<W: Write>(
    writer: W,
    rows: &[(TweetId, SentimentScore)],
) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["tweet_id", "s_pos", "s_neg", "polarity", "class"])?;
    for (id, score) in rows {
        let polarity = score.polarity();
        write_record(
            &mut w,
            &[
                id.as_str(),
                &score.positive().to_string(),
                &score.negative().to_string(),
                &polarity.value().to_string(),
                &polarity.classify().to_string(),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `group, neg, neu, pos, neg_se, neu_se, pos_se` for the baseline and the
/// three conditional groups.
pub fn write_distributions_csv<W: Write>(
    writer: W,
    baseline: &BaselineResult,
    conditionals: &[ConditionalDistribution],
) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["group", "neg", "neu", "pos", "neg_se", "neu_se", "pos_se"])?;
    let mut rows: Vec<(String, [f64; 3], [f64; 3])> =
        vec![("baseline".into(), baseline.mean.as_array(), baseline.std_err)];
    for cond in conditionals {
        rows.push((group_name(cond.response_class), cond.mean.as_array(), cond.std_err));
    }
    for (group, mean, se) in rows {
        write_record(
            &mut w,
            &[
                &group,
                &fmt(mean[0]),
                &fmt(mean[1]),
                &fmt(mean[2]),
                &fmt(se[0]),
                &fmt(se[1]),
                &fmt(se[2]),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

fn group_name(class: EmotionClass) -> String {
    match class {
        EmotionClass::Negative => "pre_negative".into(),
        EmotionClass::Neutral => "pre_neutral".into(),
        EmotionClass::Positive => "pre_positive".into(),
    }
}

/// `group, d_neg, d_neu, d_pos, u, p`: over-exposure deltas in percentage
/// points and the rank-test result per conditional group.
pub fn write_overexposure_csv<W: Write>(
    writer: W,
    rows: &[(EmotionClass, Overexposure, MannWhitney)],
) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["group", "d_neg", "d_neu", "d_pos", "u", "p"])?;
    for (class, delta, test) in rows {
        write_record(
            &mut w,
            &[
                &group_name(*class),
                &fmt(delta.negative),
                &fmt(delta.neutral),
                &fmt(delta.positive),
                &fmt(test.u),
                &fmt(test.p),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `bin_mid, response_valence, count`; bins without a response valence leave
/// the field empty.
pub fn write_valence_bins_csv<W: Write>(
    writer: W,
    bins: &[StimulusResponseBin],
) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["bin_mid", "response_valence", "count"])?;
    for bin in bins {
        let valence = bin.response_valence.map(fmt).unwrap_or_default();
        write_record(&mut w, &[&fmt(bin.midpoint()), &valence, &bin.count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// One-line fit summary: `slope, intercept, r2, n`.
pub fn write_valence_fit_csv<W: Write>(writer: W, fit: &LinearFit) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["slope", "intercept", "r2", "n"])?;
    write_record(
        &mut w,
        &[
            &fmt(fit.slope),
            &fmt(fit.intercept),
            &fmt(fit.r_squared),
            &fit.num_points.to_string(),
        ],
    )?;
    w.flush()?;
    Ok(())
}

/// `user, fraction, num_tweets`, sorted by user id.
pub fn write_users_csv<W: Write>(
    writer: W,
    fractions: &[UserSusceptibility],
) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["user", "fraction", "num_tweets"])?;
    for user in fractions {
        write_record(
            &mut w,
            &[user.user.as_str(), &fmt(user.fraction), &user.num_tweets.to_string()],
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `bin_lower, bin_upper, count, cumulative` for the susceptible-fraction
/// histogram; `cumulative` is the cumulative fraction of users.
pub fn write_fraction_histogram_csv<W: Write>(
    writer: W,
    bins: &[FractionHistogramBin],
) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["bin_lower", "bin_upper", "count", "cumulative"])?;
    for bin in bins {
        write_record(
            &mut w,
            &[
                &fmt(bin.lower),
                &fmt(bin.upper),
                &bin.count.to_string(),
                &fmt(bin.cumulative),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `class, pos_rate, neg_rate, ratio, n_users` for the low and high
/// susceptibility classes; an undefined ratio leaves the field empty.
pub fn write_classes_csv<W: Write>(
    writer: W,
    low_rates: &AdoptionRates,
    high_rates: &AdoptionRates,
) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["class", "pos_rate", "neg_rate", "ratio", "n_users"])?;
    for (name, rates) in [("low", low_rates), ("high", high_rates)] {
        let ratio = rates.ratio.map(fmt).unwrap_or_default();
        write_record(
            &mut w,
            &[
                name,
                &fmt(rates.pos_rate),
                &fmt(rates.neg_rate),
                &ratio,
                &rates.num_users.to_string(),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `tweet_id, contagion_applied, sampled_class`, in tweet order.
pub fn write_ground_truth_csv<W: Write>(writer: W, truth: &GroundTruth) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["tweet_id", "contagion_applied", "sampled_class"])?;
    for tweet in &truth.tweets {
        write_record(
            &mut w,
            &[
                tweet.tweet_id.as_str(),
                if tweet.contagion_applied { "true" } else { "false" },
                &tweet.sampled_class.to_string(),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

/// `user, beta, disp_neg, disp_neu, disp_pos`, in user order.
pub fn write_users_truth_csv<W: Write>(writer: W, truth: &GroundTruth) -> Result<()> {
    let mut w = csv_writer(writer);
    write_record(&mut w, &["user", "beta", "disp_neg", "disp_neu", "disp_pos"])?;
    for user in &truth.users {
        let d = user.disposition.as_array();
        write_record(
            &mut w,
            &[
                user.user.as_str(),
                &fmt(user.beta),
                &fmt(d[0]),
                &fmt(d[1]),
                &fmt(d[2]),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::UserId;
    use crate::null_model::SentimentProportions;

    #[test]
    fn scores_csv_shape() {
        let rows = vec![
            (TweetId::new("t1"), SentimentScore::new(3, 1).unwrap()),
            (TweetId::new("t2"), SentimentScore::new(1, 4).unwrap()),
        ];
        let mut buf = Vec::new();
        write_scores_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "tweet_id,s_pos,s_neg,polarity,class");
        assert_eq!(lines[1], "t1,3,1,2,positive");
        assert_eq!(lines[2], "t2,1,4,-3,negative");
    }

    #[test]
    fn empty_scores_csv_has_header_only() {
        let mut buf = Vec::new();
        write_scores_csv(&mut buf, &[]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
    }

    #[test]
    fn users_csv_quotes_awkward_ids() {
        let rows = vec![UserSusceptibility {
            user: UserId::new("we,ird"),
            fraction: 0.5,
            num_tweets: 4,
        }];
        let mut buf = Vec::new();
        write_users_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"we,ird\",0.5,4"));
    }

    #[test]
    fn valence_bins_csv_empty_valence_field() {
        let bins = vec![StimulusResponseBin {
            index: 0,
            lower: -1.0,
            upper: 0.0,
            response_valence: None,
            count: 0,
        }];
        let mut buf = Vec::new();
        write_valence_bins_csv(&mut buf, &bins).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with(",,0"));
    }

    #[test]
    fn distributions_csv_groups() {
        let baseline = BaselineResult {
            mean: SentimentProportions::new(0.25, 0.5, 0.25).unwrap(),
            std_err: [0.0, 0.0, 0.0],
            num_samples: 2,
            seed: 0,
            draws: vec![[0.25, 0.5, 0.25]; 2],
        };
        let cond = ConditionalDistribution {
            response_class: EmotionClass::Negative,
            mean: SentimentProportions::new(0.5, 0.25, 0.25).unwrap(),
            std_err: [0.1, 0.1, 0.1],
            num_histories: 2,
            proportions: vec![[0.5, 0.25, 0.25]; 2],
        };
        let mut buf = Vec::new();
        write_distributions_csv(&mut buf, &baseline, &[cond]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("group,neg,neu,pos,neg_se,neu_se,pos_se\n"));
        assert!(text.contains("baseline,0.25,0.5,0.25,0,0,0"));
        assert!(text.contains("pre_negative,0.5,0.25,0.25,0.1,0.1,0.1"));
    }
}
