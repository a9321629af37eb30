//! Valence of stimulus buckets and the stimulus-to-response valence fit.
//!
//! The valence of a set of classified posts is `2 * p / (p + n) - 1` over its
//! positive and negative tallies: -1 for all-negative, +1 for all-positive,
//! undefined (`None`, never 0) when the set has neither. Stimulus valences
//! are binned over [-1, +1], each bin pools the response classes of its
//! members into a response valence, and an ordinary least-squares line over
//! the bin midpoints summarizes how response valence follows stimulus
//! valence.

use crate::corpus::ExposureHistory;
use crate::error::{Error, Result};
use crate::null_model::{ClassCounts, ClassMap};
use crate::sentiment::EmotionClass;

/// Default number of bins partitioning [-1, +1].
pub const DEFAULT_NUM_BINS: usize = 20;

/// Valence of a bucket with `pos_count` positive and `neg_count` negative
/// members; neutral members never enter the ratio. `None` when both counts
/// are zero.
pub fn bucket_valence(pos_count: u64, neg_count: u64) -> Option<f64> {
    let total = pos_count + neg_count;
    if total == 0 {
        None
    } else {
        Some(2.0 * pos_count as f64 / total as f64 - 1.0)
    }
}

/// One stimulus-valence bin and the pooled valence of its responses.
#[derive(Debug, Clone, PartialEq)]
pub struct StimulusResponseBin {
    pub index: usize,
    pub lower: f64,
    pub upper: f64,
    /// Valence of the pooled response classes in this bin; `None` when the
    /// bin is empty or holds only neutral responses.
    pub response_valence: Option<f64>,
    pub count: u64,
}

impl StimulusResponseBin {
    pub fn midpoint(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }
}

/// Assign (stimulus valence, response class) pairs to bins over [-1, +1].
///
/// Bins are half-open `[lower, upper)`; the last bin is closed at +1. Each
/// bin's response valence pools the response classes of every pair that
/// landed in it.
pub fn bin_stimuli(
    pairs: &[(f64, EmotionClass)],
    num_bins: usize,
) -> Result<Vec<StimulusResponseBin>> {
    if num_bins < 2 {
        return Err(Error::InvalidConfig(format!(
            "num_bins must be >= 2, got {num_bins}"
        )));
    }
    let mut counts: Vec<ClassCounts> = vec![ClassCounts::new(); num_bins];
    for &(valence, response) in pairs {
        if !valence.is_finite() || !(-1.0..=1.0).contains(&valence) {
            return Err(Error::ValenceOutOfRange(valence));
        }
        let scaled = (valence + 1.0) / 2.0 * num_bins as f64;
        let index = (scaled.floor() as usize).min(num_bins - 1);
        counts[index].add(response);
    }
    let width = 2.0 / num_bins as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(index, tally)| StimulusResponseBin {
            index,
            lower: -1.0 + index as f64 * width,
            upper: -1.0 + (index + 1) as f64 * width,
            response_valence: bucket_valence(
                tally.get(EmotionClass::Positive),
                tally.get(EmotionClass::Negative),
            ),
            count: tally.total(),
        })
        .collect())
}

/// Build (stimulus valence, response class) pairs from exposure histories.
///
/// The stimulus valence is the valence of the history's stimuli; histories
/// whose stimuli are all neutral have no defined valence and are skipped.
pub fn history_valence_pairs(
    histories: &[ExposureHistory],
    classes: &ClassMap,
) -> Result<Vec<(f64, EmotionClass)>> {
    let mut pairs = Vec::with_capacity(histories.len());
    for history in histories {
        let response = *classes
            .get(&history.target)
            .ok_or_else(|| Error::MissingClass(history.target.clone()))?;
        let mut counts = ClassCounts::new();
        for id in &history.stimuli {
            let class = classes.get(id).ok_or_else(|| Error::MissingClass(id.clone()))?;
            counts.add(*class);
        }
        if let Some(valence) = bucket_valence(
            counts.get(EmotionClass::Positive),
            counts.get(EmotionClass::Negative),
        ) {
            pairs.push((valence, response));
        }
    }
    Ok(pairs)
}

/// How bins are weighted in the valence fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitWeighting {
    /// Every usable bin counts equally.
    Unweighted,
    /// Bins weighted by their pair count.
    ByCount,
}

/// Least-squares line through the binned responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub num_points: usize,
}

/// Unweighted OLS of response valence on bin midpoints.
pub fn fit_linear(bins: &[StimulusResponseBin]) -> Result<LinearFit> {
    fit_linear_with(bins, FitWeighting::Unweighted)
}

/// OLS of response valence on bin midpoints; bins without a response valence
/// are excluded.
pub fn fit_linear_with(
    bins: &[StimulusResponseBin],
    weighting: FitWeighting,
) -> Result<LinearFit> {
    let points: Vec<(f64, f64, f64)> = bins
        .iter()
        .filter_map(|bin| {
            bin.response_valence.map(|y| {
                let w = match weighting {
                    FitWeighting::Unweighted => 1.0,
                    FitWeighting::ByCount => bin.count as f64,
                };
                (bin.midpoint(), y, w)
            })
        })
        .collect();
    if points.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: points.len() });
    }
    let w_sum: f64 = points.iter().map(|&(_, _, w)| w).sum();
    let x_bar: f64 = points.iter().map(|&(x, _, w)| w * x).sum::<f64>() / w_sum;
    let y_bar: f64 = points.iter().map(|&(_, y, w)| w * y).sum::<f64>() / w_sum;
    let s_xx: f64 = points.iter().map(|&(x, _, w)| w * (x - x_bar) * (x - x_bar)).sum();
    let s_xy: f64 =
        points.iter().map(|&(x, y, w)| w * (x - x_bar) * (y - y_bar)).sum();
    if s_xx <= 0.0 {
        return Err(Error::InvalidConfig(
            "bin midpoints have zero variance".into(),
        ));
    }
    let slope = s_xy / s_xx;
    let intercept = y_bar - slope * x_bar;
    let ss_tot: f64 = points.iter().map(|&(_, y, w)| w * (y - y_bar) * (y - y_bar)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y, w)| {
            let r = y - (intercept + slope * x);
            w * r * r
        })
        .sum();
    let r_squared = if ss_tot <= f64::EPSILON {
        if ss_res <= f64::EPSILON {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(LinearFit { slope, intercept, r_squared, num_points: points.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valence_balanced_is_zero() {
        assert_eq!(bucket_valence(7, 7), Some(0.0));
    }

    #[test]
    fn valence_extremes() {
        assert_eq!(bucket_valence(5, 0), Some(1.0));
        assert_eq!(bucket_valence(0, 5), Some(-1.0));
        assert_eq!(bucket_valence(0, 0), None);
    }

    #[test]
    fn valence_direct_evaluation() {
        assert_eq!(bucket_valence(3, 1), Some(0.5));
    }

    #[test]
    fn bin_edges() {
        let pairs = vec![(-1.0, EmotionClass::Positive), (1.0, EmotionClass::Negative)];
        let bins = bin_stimuli(&pairs, 20).unwrap();
        assert_eq!(bins.len(), 20);
        assert_eq!(bins[0].count, 1);
        assert_eq!(bins[19].count, 1);
        assert_eq!(bins[0].response_valence, Some(1.0));
        assert_eq!(bins[19].response_valence, Some(-1.0));
        assert!((bins[0].lower - -1.0).abs() < 1e-12);
        assert!((bins[19].upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bin_boundary_is_half_open() {
        // 0.1 sits exactly on the edge between bins 10 and 11 at width 0.1.
        let pairs = vec![(0.1, EmotionClass::Positive)];
        let bins = bin_stimuli(&pairs, 20).unwrap();
        assert_eq!(bins[11].count, 1);
        assert_eq!(bins[10].count, 0);
    }

    #[test]
    fn bin_pools_response_classes() {
        let pairs = vec![
            (0.31, EmotionClass::Positive),
            (0.33, EmotionClass::Positive),
            (0.39, EmotionClass::Negative),
        ];
        let bins = bin_stimuli(&pairs, 20).unwrap();
        let bin = &bins[13]; // [0.3, 0.4)
        assert_eq!(bin.count, 3);
        let expected = 2.0 * (2.0 / 3.0) - 1.0;
        assert!((bin.response_valence.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn bin_neutral_only_has_no_valence() {
        let pairs = vec![(0.0, EmotionClass::Neutral), (0.0, EmotionClass::Neutral)];
        let bins = bin_stimuli(&pairs, 4).unwrap();
        let bin = &bins[2];
        assert_eq!(bin.count, 2);
        assert_eq!(bin.response_valence, None);
    }

    #[test]
    fn bin_rejects_out_of_range() {
        let pairs = vec![(1.5, EmotionClass::Positive)];
        assert!(matches!(
            bin_stimuli(&pairs, 20),
            Err(Error::ValenceOutOfRange(_))
        ));
        assert!(bin_stimuli(&[], 1).is_err());
    }

    #[test]
    fn fit_recovers_perfect_line() {
        // Responses exactly on y = 0.7 x across several bins.
        let mut pairs = Vec::new();
        for k in 0..10 {
            let x = -0.9 + 0.2 * k as f64;
            // Choose pos/neg counts so the pooled valence equals 0.7 x.
            let target = 0.7 * x;
            let pos = ((1.0 + target) * 500.0).round() as usize;
            let neg = 1000 - pos;
            for _ in 0..pos {
                pairs.push((x, EmotionClass::Positive));
            }
            for _ in 0..neg {
                pairs.push((x, EmotionClass::Negative));
            }
        }
        let bins = bin_stimuli(&pairs, 10).unwrap();
        let fit = fit_linear(&bins).unwrap();
        assert!((fit.slope - 0.7).abs() < 1e-12, "slope {}", fit.slope);
        assert!(fit.intercept.abs() < 1e-12, "intercept {}", fit.intercept);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.num_points, 10);
    }

    #[test]
    fn fit_requires_two_usable_bins() {
        let pairs = vec![(0.05, EmotionClass::Positive)];
        let bins = bin_stimuli(&pairs, 20).unwrap();
        assert!(matches!(
            fit_linear(&bins),
            Err(Error::TooFewPoints { needed: 2, found: 1 })
        ));
    }

    #[test]
    fn fit_zero_variance_y() {
        let pairs = vec![
            (-0.55, EmotionClass::Positive),
            (0.55, EmotionClass::Positive),
        ];
        let bins = bin_stimuli(&pairs, 20).unwrap();
        let fit = fit_linear(&bins).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn fit_weighted_differs_when_counts_skew() {
        let mut pairs = vec![
            (-0.95, EmotionClass::Negative), // lone outlier bin
        ];
        for _ in 0..100 {
            pairs.push((0.15, EmotionClass::Positive));
            pairs.push((0.45, EmotionClass::Positive));
        }
        let bins = bin_stimuli(&pairs, 20).unwrap();
        let plain = fit_linear(&bins).unwrap();
        let weighted = fit_linear_with(&bins, FitWeighting::ByCount).unwrap();
        assert!(plain.slope > weighted.slope);
    }

    proptest! {
        /// Every pair lands in exactly one bin.
        #[test]
        fn bins_partition_pairs(
            valences in proptest::collection::vec(-1.0f64..=1.0, 0..200),
            num_bins in 2usize..40,
        ) {
            let pairs: Vec<(f64, EmotionClass)> = valences
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, EmotionClass::ALL[i % 3]))
                .collect();
            let bins = bin_stimuli(&pairs, num_bins).unwrap();
            prop_assert_eq!(bins.len(), num_bins);
            let total: u64 = bins.iter().map(|b| b.count).sum();
            prop_assert_eq!(total, pairs.len() as u64);
            for (i, bin) in bins.iter().enumerate() {
                prop_assert_eq!(bin.index, i);
            }
        }

        /// Valence is antisymmetric and scale-invariant.
        #[test]
        fn valence_symmetries(a in 0u64..500, b in 0u64..500, k in 1u64..20) {
            prop_assume!(a + b > 0);
            let v = bucket_valence(a, b).unwrap();
            let flipped = bucket_valence(b, a).unwrap();
            prop_assert!((v + flipped).abs() < 1e-12);
            let scaled = bucket_valence(k * a, k * b).unwrap();
            prop_assert!((v - scaled).abs() < 1e-12);
        }

        /// Reordering bins does not change the fit.
        #[test]
        fn fit_invariant_under_bin_order(seed in 0u64..500) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let pairs: Vec<(f64, EmotionClass)> = (0..60)
                .map(|i| {
                    let v = -0.95 + (i as f64) * 0.03;
                    let class = if i % 3 == 0 {
                        EmotionClass::Negative
                    } else {
                        EmotionClass::Positive
                    };
                    (v.clamp(-1.0, 1.0), class)
                })
                .collect();
            let mut bins = bin_stimuli(&pairs, 10).unwrap();
            let reference = fit_linear(&bins).unwrap();
            bins.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let shuffled = fit_linear(&bins).unwrap();
            prop_assert!((reference.slope - shuffled.slope).abs() < 1e-12);
            prop_assert!((reference.intercept - shuffled.intercept).abs() < 1e-12);
            prop_assert!((reference.r_squared - shuffled.r_squared).abs() < 1e-12);
        }
    }
}
