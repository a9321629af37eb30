//! Synthetic social worlds with known contagion and homophily.
//!
//! Users post via Poisson processes; each post's emotion class comes either
//! from the author's own disposition or, with the configured contagion
//! probability, from the class composition of the author's one-hour exposure
//! window. Homophily acts only at link formation (disposition-similar users
//! connect more often), never at posting time, so a zero-contagion,
//! high-homophily world isolates the observational confound.
//!
//! Texts are synthesized from three disjoint word pools (strength +3,
//! strength -3, and fillers unknown to the bundled lexicon), so every text
//! scores into its intended class by construction. Identical configurations
//! produce bit-identical outputs.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};

use crate::corpus::{Dataset, FollowGraph, TweetId, TweetRecord, UserId};
use crate::error::{Error, Result};
use crate::null_model::SentimentProportions;
use crate::seeds;
use crate::sentiment::EmotionClass;

/// Exposure window used by the contagion mechanism, matching the analysis
/// window.
pub const WINDOW_SECONDS: i64 = 3600;

/// Log-normal spread of per-user dispositions around the base distribution.
pub const DISPOSITION_SPREAD: f64 = 0.9;

/// Words scoring +3 under the bundled lexicon.
pub const POSITIVE_POOL: [&str; 10] = [
    "love", "great", "excellent", "happy", "proud", "cheerful", "grateful", "lovely",
    "hopeful", "glad",
];

/// Words scoring -3 under the bundled lexicon.
pub const NEGATIVE_POOL: [&str; 10] = [
    "sad", "angry", "scared", "worried", "depressed", "disappointed", "painful",
    "hopeless", "lonely", "guilty",
];

/// Filler words absent from every bundled lexicon table.
pub const FILLER_POOL: [&str; 40] = [
    "morning", "afternoon", "evening", "today", "tomorrow", "meeting", "coffee",
    "train", "office", "report", "update", "weather", "window", "garden", "kitchen",
    "music", "lunch", "dinner", "street", "market", "reading", "writing", "waiting",
    "walking", "about", "around", "maybe", "later", "again", "still", "with", "from",
    "over", "under", "some", "many", "this", "that", "here", "there",
];

/// Parameters of one synthetic world.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_users: usize,
    /// Expected out-degree of each user.
    pub mean_followees: f64,
    pub post_rate_per_hour: f64,
    /// Population-level disposition the per-user dispositions scatter around.
    pub base_distribution: SentimentProportions,
    /// Probability that a post copies its class from the exposure window.
    pub contagion_strength: f64,
    /// Link-formation preference for disposition-similar users.
    pub homophily_strength: f64,
    pub duration_hours: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_users: 1000,
            mean_followees: 40.0,
            post_rate_per_hour: 0.5,
            base_distribution: SentimentProportions::normalized(0.20, 0.45, 0.35)
                .expect("valid base distribution"),
            contagion_strength: 0.5,
            homophily_strength: 0.0,
            duration_hours: 48.0,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_users < 2 {
            return Err(Error::InvalidConfig("n_users must be >= 2".into()));
        }
        if !(self.mean_followees > 0.0) {
            return Err(Error::InvalidConfig("mean_followees must be > 0".into()));
        }
        if self.mean_followees >= self.n_users as f64 {
            return Err(Error::InvalidConfig(format!(
                "mean_followees {} must be smaller than n_users {}",
                self.mean_followees, self.n_users
            )));
        }
        if !(self.post_rate_per_hour > 0.0) {
            return Err(Error::InvalidConfig("post_rate_per_hour must be > 0".into()));
        }
        if !(0.0..=1.0).contains(&self.contagion_strength) {
            return Err(Error::InvalidConfig("contagion_strength must be in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.homophily_strength) {
            return Err(Error::InvalidConfig("homophily_strength must be in [0, 1]".into()));
        }
        if !self.duration_hours.is_finite() || self.duration_hours < 0.0 {
            return Err(Error::InvalidConfig("duration_hours must be >= 0".into()));
        }
        Ok(())
    }
}

/// Per-tweet ground truth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetTruth {
    pub tweet_id: TweetId,
    /// True when the class was sampled from a non-empty exposure window.
    pub contagion_applied: bool,
    pub sampled_class: EmotionClass,
}

/// Per-user ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct UserTruth {
    pub user: UserId,
    pub beta: f64,
    pub disposition: SentimentProportions,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundTruth {
    pub tweets: Vec<TweetTruth>,
    pub users: Vec<UserTruth>,
}

/// Everything one simulation run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    /// Records in ascending (timestamp, tweet_id) order.
    pub records: Vec<TweetRecord>,
    pub graph: FollowGraph,
    pub truth: GroundTruth,
}

impl SimOutput {
    pub fn dataset(&self) -> Result<Dataset> {
        Dataset::from_records(self.records.clone())
    }
}

/// Canonical synthetic user id for an index.
pub fn user_id(index: usize) -> UserId {
    UserId::new(format!("u{index:06}"))
}

/// Canonical synthetic tweet id for an index.
pub fn tweet_id(index: usize) -> TweetId {
    TweetId::new(format!("t{index:08}"))
}

fn draw_dispositions(config: &SimConfig, rng: &mut ChaCha8Rng) -> Vec<SentimentProportions> {
    let base = config.base_distribution.as_array();
    (0..config.n_users)
        .map(|_| {
            let mut weights = [0.0f64; 3];
            for (w, b) in weights.iter_mut().zip(base) {
                let z: f64 = rng.sample(StandardNormal);
                *w = b * (DISPOSITION_SPREAD * z).exp();
            }
            SentimentProportions::normalized(weights[0], weights[1], weights[2])
                .expect("positive weights")
        })
        .collect()
}

fn total_variation(a: &SentimentProportions, b: &SentimentProportions) -> f64 {
    a.as_array()
        .iter()
        .zip(b.as_array())
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        / 2.0
}

/// Followee lists by user index, each sorted ascending.
fn generate_adjacency(
    config: &SimConfig,
    dispositions: &[SentimentProportions],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<u32>>> {
    config.validate()?;
    let n = config.n_users;
    if dispositions.len() != n {
        return Err(Error::InvalidConfig(format!(
            "expected {n} dispositions, got {}",
            dispositions.len()
        )));
    }
    let eta = config.homophily_strength;
    let mut adjacency: Vec<Vec<u32>> = Vec::with_capacity(n);
    if eta == 0.0 {
        let p = (config.mean_followees / (n - 1) as f64).min(1.0);
        let binomial = Binomial::new((n - 1) as u64, p)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        for u in 0..n {
            let degree = binomial.sample(rng) as usize;
            let mut followees: Vec<u32> = rand::seq::index::sample(rng, n - 1, degree)
                .into_iter()
                .map(|idx| if idx < u { idx as u32 } else { (idx + 1) as u32 })
                .collect();
            followees.sort_unstable();
            adjacency.push(followees);
        }
    } else {
        // Edge probability mixes a uniform choice with a disposition-
        // similarity-proportional choice; either way the expected out-degree
        // stays mean_followees (up to the cap at probability 1).
        let uniform = 1.0 / (n - 1) as f64;
        for u in 0..n {
            let sims: Vec<f64> = (0..n)
                .map(|v| {
                    if v == u {
                        0.0
                    } else {
                        1.0 - total_variation(&dispositions[u], &dispositions[v])
                    }
                })
                .collect();
            let sim_sum: f64 = sims.iter().sum();
            let mut followees = Vec::new();
            for (v, &sim) in sims.iter().enumerate() {
                if v == u {
                    continue;
                }
                let similarity_weight =
                    if sim_sum > 0.0 { sim / sim_sum } else { uniform };
                let w = (1.0 - eta) * uniform + eta * similarity_weight;
                let p = (config.mean_followees * w).min(1.0);
                if rng.gen_bool(p) {
                    followees.push(v as u32);
                }
            }
            adjacency.push(followees);
        }
    }
    Ok(adjacency)
}

fn adjacency_to_graph(adjacency: &[Vec<u32>]) -> FollowGraph {
    let mut graph = FollowGraph::new();
    for (u, followees) in adjacency.iter().enumerate() {
        graph.add_user(user_id(u));
        for &v in followees {
            graph
                .add_edge(user_id(u), user_id(v as usize))
                .expect("generator never emits self-loops");
        }
    }
    graph
}

/// Generate a follow graph with expected out-degree `mean_followees`.
///
/// With positive homophily strength, followees are preferentially chosen
/// among users with similar dispositions (similarity is one minus the total
/// variation distance between dispositions).
pub fn generate_graph(
    config: &SimConfig,
    dispositions: &[SentimentProportions],
    rng: &mut ChaCha8Rng,
) -> Result<FollowGraph> {
    Ok(adjacency_to_graph(&generate_adjacency(config, dispositions, rng)?))
}

/// Assign `split * n_users` (rounded) users the high beta and the rest the
/// low one. The subset is drawn from the config seed, so the assignment is
/// reproducible.
pub fn heterogeneous_beta(
    config: &SimConfig,
    low: f64,
    high: f64,
    split: f64,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&low) || !(0.0..=1.0).contains(&high) || low >= high {
        return Err(Error::InvalidConfig(format!(
            "need 0 <= low < high <= 1, got low={low}, high={high}"
        )));
    }
    if !(0.0..=1.0).contains(&split) {
        return Err(Error::InvalidConfig(format!("split {split} outside [0, 1]")));
    }
    let n = config.n_users;
    let k = (split * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(
        config.seed,
        seeds::stage::BETA_ASSIGNMENT,
    ));
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(&mut rng);
    let mut betas = vec![low; n];
    for &i in &indices[..k] {
        betas[i] = high;
    }
    Ok(betas)
}

fn sample_class(disposition: &SentimentProportions, rng: &mut ChaCha8Rng) -> EmotionClass {
    let r: f64 = rng.gen();
    let [neg, neu, _] = disposition.as_array();
    if r < neg {
        EmotionClass::Negative
    } else if r < neg + neu {
        EmotionClass::Neutral
    } else {
        EmotionClass::Positive
    }
}

fn synthesize_text(class: EmotionClass, rng: &mut ChaCha8Rng) -> String {
    let n_fillers = rng.gen_range(3..=6);
    let mut words: Vec<&str> = (0..n_fillers)
        .map(|_| FILLER_POOL[rng.gen_range(0..FILLER_POOL.len())])
        .collect();
    let pool = match class {
        EmotionClass::Neutral => None,
        EmotionClass::Positive => Some(&POSITIVE_POOL),
        EmotionClass::Negative => Some(&NEGATIVE_POOL),
    };
    if let Some(pool) = pool {
        let word = pool[rng.gen_range(0..pool.len())];
        let at = rng.gen_range(0..=words.len());
        words.insert(at, word);
    }
    words.join(" ")
}

/// Run a simulation with one shared contagion strength.
pub fn simulate(config: &SimConfig) -> Result<SimOutput> {
    config.validate()?;
    let betas = vec![config.contagion_strength; config.n_users];
    simulate_with_betas(config, &betas)
}

/// Run a simulation with per-user contagion strengths.
///
/// Posts are generated in global timestamp order on one logical timeline:
/// with probability `beta_u` a post samples its class from the class
/// composition of the author's exposure window (falling back to the author's
/// disposition when the window is empty), otherwise from the disposition.
pub fn simulate_with_betas(config: &SimConfig, betas: &[f64]) -> Result<SimOutput> {
    config.validate()?;
    let n = config.n_users;
    if betas.len() != n {
        return Err(Error::InvalidConfig(format!(
            "expected {n} betas, got {}",
            betas.len()
        )));
    }
    if betas.iter().any(|b| !(0.0..=1.0).contains(b)) {
        return Err(Error::InvalidConfig("betas must be in [0, 1]".into()));
    }

    let mut disp_rng =
        ChaCha8Rng::seed_from_u64(seeds::derive(config.seed, seeds::stage::DISPOSITIONS));
    let dispositions = draw_dispositions(config, &mut disp_rng);
    let mut graph_rng =
        ChaCha8Rng::seed_from_u64(seeds::derive(config.seed, seeds::stage::GRAPH));
    let adjacency = generate_adjacency(config, &dispositions, &mut graph_rng)?;
    let graph = adjacency_to_graph(&adjacency);
    let mut followers: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (u, followees) in adjacency.iter().enumerate() {
        for &v in followees {
            followers[v as usize].push(u as u32);
        }
    }

    // Posting times: per-user Poisson counts, uniform placement.
    let duration_secs = (config.duration_hours * 3600.0).floor() as i64;
    let expected_posts = config.post_rate_per_hour * config.duration_hours;
    let mut times_rng =
        ChaCha8Rng::seed_from_u64(seeds::derive(config.seed, seeds::stage::POST_TIMES));
    let mut posts: Vec<(i64, u32)> = Vec::new();
    if duration_secs > 0 && expected_posts > 0.0 {
        let poisson = Poisson::new(expected_posts)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        for u in 0..n {
            let count = poisson.sample(&mut times_rng) as usize;
            for _ in 0..count {
                posts.push((times_rng.gen_range(0..duration_secs), u as u32));
            }
        }
    }
    posts.sort_unstable();

    // Per-user feed of followee posts inside the exposure window.
    let mut feeds: Vec<(VecDeque<(i64, EmotionClass)>, [u64; 3])> =
        vec![(VecDeque::new(), [0; 3]); n];
    let evict = |feed: &mut (VecDeque<(i64, EmotionClass)>, [u64; 3]), now: i64| {
        while let Some(&(ts, class)) = feed.0.front() {
            if ts < now - WINDOW_SECONDS {
                feed.0.pop_front();
                feed.1[class.index()] -= 1;
            } else {
                break;
            }
        }
    };

    let mut class_rng =
        ChaCha8Rng::seed_from_u64(seeds::derive(config.seed, seeds::stage::CLASS_CHOICE));
    let mut text_rng =
        ChaCha8Rng::seed_from_u64(seeds::derive(config.seed, seeds::stage::TEXT));
    let mut records = Vec::with_capacity(posts.len());
    let mut tweet_truths = Vec::with_capacity(posts.len());

    let mut i = 0;
    while i < posts.len() {
        let now = posts[i].0;
        let mut j = i;
        while j < posts.len() && posts[j].0 == now {
            j += 1;
        }
        // Classify every post of this timestamp before any of them becomes
        // visible: simultaneous posts cannot stimulate each other.
        let mut batch_classes = Vec::with_capacity(j - i);
        for k in i..j {
            let author = posts[k].1 as usize;
            evict(&mut feeds[author], now);
            let window = feeds[author].1;
            let window_total: u64 = window.iter().sum();
            let contagion_roll = class_rng.gen::<f64>() < betas[author];
            let (class, contagion_applied) = if contagion_roll && window_total > 0 {
                let r = class_rng.gen_range(0..window_total);
                let class = if r < window[0] {
                    EmotionClass::Negative
                } else if r < window[0] + window[1] {
                    EmotionClass::Neutral
                } else {
                    EmotionClass::Positive
                };
                (class, true)
            } else {
                (sample_class(&dispositions[author], &mut class_rng), false)
            };
            batch_classes.push(class);
            let id = tweet_id(k);
            tweet_truths.push(TweetTruth {
                tweet_id: id.clone(),
                contagion_applied,
                sampled_class: class,
            });
            records.push(TweetRecord {
                tweet_id: id,
                author: user_id(author),
                timestamp: now,
                lang: "en".into(),
                has_media_or_url: false,
                text: synthesize_text(class, &mut text_rng),
            });
        }
        for k in i..j {
            let author = posts[k].1 as usize;
            let class = batch_classes[k - i];
            for &f in &followers[author] {
                let feed = &mut feeds[f as usize];
                evict(feed, now);
                feed.0.push_back((now, class));
                feed.1[class.index()] += 1;
            }
        }
        i = j;
    }

    let users = (0..n)
        .map(|u| UserTruth {
            user: user_id(u),
            beta: betas[u],
            disposition: dispositions[u],
        })
        .collect();
    Ok(SimOutput {
        records,
        graph,
        truth: GroundTruth { tweets: tweet_truths, users },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentiment::Lexicon;

    fn small_config() -> SimConfig {
        SimConfig {
            n_users: 60,
            mean_followees: 15.0,
            post_rate_per_hour: 1.0,
            duration_hours: 24.0,
            seed: 7,
            ..SimConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::default().validate().is_ok());
        assert!(SimConfig { n_users: 1, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig { mean_followees: 0.0, ..SimConfig::default() }
            .validate()
            .is_err());
        assert!(SimConfig { n_users: 10, mean_followees: 10.0, ..SimConfig::default() }
            .validate()
            .is_err());
        assert!(SimConfig { contagion_strength: 1.5, ..SimConfig::default() }
            .validate()
            .is_err());
        assert!(SimConfig { duration_hours: -1.0, ..SimConfig::default() }
            .validate()
            .is_err());
    }

    #[test]
    fn two_users_follow_each_other() {
        let config = SimConfig {
            n_users: 2,
            mean_followees: 1.0,
            ..SimConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dispositions = vec![config.base_distribution; 2];
        let graph = generate_graph(&config, &dispositions, &mut rng).unwrap();
        assert!(graph.followees(&user_id(0)).unwrap().contains(&user_id(1)));
        assert!(graph.followees(&user_id(1)).unwrap().contains(&user_id(0)));
    }

    #[test]
    fn uniform_graph_mean_degree() {
        let config = SimConfig {
            n_users: 10_000,
            mean_followees: 30.0,
            ..SimConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dispositions = vec![config.base_distribution; config.n_users];
        let graph = generate_graph(&config, &dispositions, &mut rng).unwrap();
        let mean = graph.num_edges() as f64 / config.n_users as f64;
        assert!(
            (mean - 30.0).abs() / 30.0 < 0.05,
            "mean out-degree {mean} more than 5% from 30"
        );
    }

    #[test]
    fn graph_is_deterministic() {
        let config = small_config();
        let dispositions = vec![config.base_distribution; config.n_users];
        let a = generate_graph(
            &config,
            &dispositions,
            &mut ChaCha8Rng::seed_from_u64(3),
        )
        .unwrap();
        let b = generate_graph(
            &config,
            &dispositions,
            &mut ChaCha8Rng::seed_from_u64(3),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn homophilous_graph_prefers_similar_users() {
        let config = SimConfig {
            n_users: 300,
            mean_followees: 20.0,
            homophily_strength: 0.9,
            seed: 5,
            ..SimConfig::default()
        };
        let mut disp_rng =
            ChaCha8Rng::seed_from_u64(seeds::derive(config.seed, seeds::stage::DISPOSITIONS));
        let dispositions = draw_dispositions(&config, &mut disp_rng);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let adjacency = generate_adjacency(&config, &dispositions, &mut rng).unwrap();

        let mut linked = Vec::new();
        for (u, followees) in adjacency.iter().enumerate() {
            for &v in followees {
                linked.push(total_variation(&dispositions[u], &dispositions[v as usize]));
            }
        }
        let mut all_pairs = Vec::new();
        for u in 0..config.n_users {
            for v in 0..config.n_users {
                if u != v {
                    all_pairs.push(total_variation(&dispositions[u], &dispositions[v]));
                }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!(
            mean(&linked) < mean(&all_pairs) - 0.01,
            "links are not biased toward similar users"
        );
    }

    #[test]
    fn simulate_is_deterministic() {
        let config = small_config();
        let a = simulate(&config).unwrap();
        let b = simulate(&config).unwrap();
        assert_eq!(a, b);
        let c = simulate(&SimConfig { seed: 8, ..small_config() }).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn beta_zero_never_applies_contagion() {
        let config = SimConfig { contagion_strength: 0.0, ..small_config() };
        let out = simulate(&config).unwrap();
        assert!(!out.records.is_empty());
        assert!(out.truth.tweets.iter().all(|t| !t.contagion_applied));
    }

    #[test]
    fn beta_one_applies_contagion_once_windows_fill() {
        let config = SimConfig { contagion_strength: 1.0, ..small_config() };
        let out = simulate(&config).unwrap();
        let applied = out.truth.tweets.iter().filter(|t| t.contagion_applied).count();
        // Only posts with an empty window fall back to dispositions.
        assert!(applied as f64 > 0.8 * out.truth.tweets.len() as f64);
    }

    #[test]
    fn beta_one_amplifies_majority_class() {
        let config = SimConfig {
            n_users: 200,
            mean_followees: 30.0,
            post_rate_per_hour: 1.0,
            duration_hours: 72.0,
            contagion_strength: 1.0,
            base_distribution: SentimentProportions::normalized(0.1, 0.15, 0.75)
                .unwrap(),
            seed: 21,
            ..SimConfig::default()
        };
        let out = simulate(&config).unwrap();
        let positive = out
            .truth
            .tweets
            .iter()
            .filter(|t| t.sampled_class == EmotionClass::Positive)
            .count() as f64
            / out.truth.tweets.len() as f64;
        assert!(
            positive > config.base_distribution.positive(),
            "positive fraction {positive} did not exceed base {}",
            config.base_distribution.positive()
        );
    }

    #[test]
    fn duration_zero_is_empty() {
        let config = SimConfig { duration_hours: 0.0, ..small_config() };
        let out = simulate(&config).unwrap();
        assert!(out.records.is_empty());
        assert!(out.truth.tweets.is_empty());
        assert_eq!(out.truth.users.len(), config.n_users);
    }

    #[test]
    fn records_are_time_ordered_and_eligible() {
        let out = simulate(&small_config()).unwrap();
        for pair in out.records.windows(2) {
            assert!(
                (pair[0].timestamp, &pair[0].tweet_id)
                    < (pair[1].timestamp, &pair[1].tweet_id)
            );
        }
        assert!(out.records.iter().all(TweetRecord::is_eligible));
    }

    #[test]
    fn heterogeneous_beta_split_counts() {
        let config = SimConfig { n_users: 1000, ..SimConfig::default() };
        let betas = heterogeneous_beta(&config, 0.1, 0.9, 0.5).unwrap();
        assert_eq!(betas.iter().filter(|&&b| b == 0.9).count(), 500);
        assert_eq!(betas.iter().filter(|&&b| b == 0.1).count(), 500);

        let all_low = heterogeneous_beta(&config, 0.1, 0.9, 0.0).unwrap();
        assert!(all_low.iter().all(|&b| b == 0.1));

        assert!(heterogeneous_beta(&config, 0.9, 0.1, 0.5).is_err());
    }

    #[test]
    fn texts_classify_to_sampled_class() {
        let lexicon = Lexicon::bundled();
        let out = simulate(&small_config()).unwrap();
        assert!(!out.records.is_empty());
        for (record, truth) in out.records.iter().zip(&out.truth.tweets) {
            assert_eq!(record.tweet_id, truth.tweet_id);
            assert_eq!(
                lexicon.classify(&record.text),
                truth.sampled_class,
                "text {:?} did not classify as {}",
                record.text,
                truth.sampled_class
            );
        }
    }

    #[test]
    fn word_pools_are_disjoint_from_lexicon_tables() {
        let lexicon = Lexicon::bundled();
        for word in FILLER_POOL {
            assert_eq!(
                lexicon.score(word),
                crate::sentiment::SentimentScore::NEUTRAL,
                "filler {word:?} matches the lexicon"
            );
            // Fillers must not boost or negate either: probe both preceding
            // positions of a sentiment word.
            let probe = format!("{word} {word} love");
            let s = lexicon.score(&probe);
            assert_eq!((s.positive(), s.negative()), (3, 1), "filler {word:?} interferes");
        }
        for word in POSITIVE_POOL {
            let s = lexicon.score(word);
            assert_eq!((s.positive(), s.negative()), (3, 1), "pool word {word:?}");
        }
        for word in NEGATIVE_POOL {
            let s = lexicon.score(word);
            assert_eq!((s.positive(), s.negative()), (1, 3), "pool word {word:?}");
        }
    }
}
