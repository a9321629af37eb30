//! Event-log ingestion, the follow graph, eligibility filters, and exposure
//! history reconstruction.
//!
//! The event log is JSON Lines: one object per line with fields `tweet_id`,
//! `author`, `timestamp` (epoch seconds), `lang`, `has_media_or_url`, `text`.
//! JSON string escaping covers arbitrary text content. The follow graph is a
//! CSV with header `follower,followee`.
//!
//! An exposure history collects, for one target post, every eligible post by
//! the author's followees inside the half-open window
//! `[target.timestamp - window, target.timestamp)`: a stimulus posted at
//! exactly the target's timestamp is not something the target can have
//! responded to, so it falls on the open end.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exposure window length used throughout the crate unless overridden.
pub const DEFAULT_WINDOW_SECONDS: i64 = 3600;
/// Minimum history size for a post to qualify for analysis.
pub const DEFAULT_MIN_STIMULI: usize = 20;

#[derive(
    Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct TweetId(String);

impl TweetId {
    pub fn new(id: impl Into<String>) -> Self {
        TweetId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TweetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TweetId {
    fn from(s: &str) -> Self {
        TweetId::new(s)
    }
}

#[derive(
    Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct UserId(String);

impl UserId {
    pub fn new(id: impl Into<String>) -> Self {
        UserId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for UserId {
    fn from(s: &str) -> Self {
        UserId::new(s)
    }
}

/// One timestamped post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: TweetId,
    pub author: UserId,
    pub timestamp: i64,
    pub lang: String,
    pub has_media_or_url: bool,
    pub text: String,
}

impl TweetRecord {
    /// English-language posts without media or URLs are the only ones whose
    /// sentiment can be attributed unambiguously.
    pub fn is_eligible(&self) -> bool {
        self.lang == "en" && !self.has_media_or_url
    }
}

/// An immutable, indexed set of tweet records.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    records: Vec<TweetRecord>,
    by_id: HashMap<TweetId, usize>,
    /// Per-author record indices sorted by (timestamp, tweet_id).
    by_author: BTreeMap<UserId, Vec<usize>>,
}

impl Dataset {
    /// Build a dataset, rejecting duplicate tweet ids and negative timestamps.
    pub fn from_records(records: Vec<TweetRecord>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if r.timestamp < 0 {
                return Err(Error::InvalidConfig(format!(
                    "tweet {} has negative timestamp {}",
                    r.tweet_id, r.timestamp
                )));
            }
            if by_id.insert(r.tweet_id.clone(), i).is_some() {
                return Err(Error::DuplicateTweetId(r.tweet_id.clone()));
            }
        }
        let mut by_author: BTreeMap<UserId, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            by_author.entry(r.author.clone()).or_default().push(i);
        }
        for indices in by_author.values_mut() {
            indices.sort_by(|&a, &b| {
                (records[a].timestamp, &records[a].tweet_id)
                    .cmp(&(records[b].timestamp, &records[b].tweet_id))
            });
        }
        Ok(Dataset { records, by_id, by_author })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[TweetRecord] {
        &self.records
    }

    pub fn get(&self, id: &TweetId) -> Option<&TweetRecord> {
        self.by_id.get(id).map(|&i| &self.records[i])
    }

    pub fn author_of(&self, id: &TweetId) -> Option<&UserId> {
        self.get(id).map(|r| &r.author)
    }

    fn author_posts(&self, user: &UserId) -> &[usize] {
        self.by_author.get(user).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Outcome of loading an event log.
#[derive(Debug)]
pub struct LoadOutcome {
    pub dataset: Dataset,
    /// Malformed (or, outside strict mode, duplicate) lines skipped.
    pub skipped: usize,
}

/// Read a JSON Lines event log.
///
/// Malformed lines are skipped and counted; in strict mode the first one is
/// fatal, as is a duplicate tweet id. Blank lines are ignored.
pub fn load_events<R: BufRead>(reader: R, strict: bool) -> Result<LoadOutcome> {
    let mut records: Vec<TweetRecord> = Vec::new();
    let mut seen: HashSet<TweetId> = HashSet::new();
    let mut skipped = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: std::result::Result<TweetRecord, _> = serde_json::from_str(&line);
        let record = match parsed {
            Ok(r) if r.timestamp >= 0 => r,
            Ok(r) => {
                if strict {
                    return Err(Error::EventLog {
                        line: line_no,
                        msg: format!("negative timestamp {}", r.timestamp),
                    });
                }
                skipped += 1;
                continue;
            }
            Err(e) => {
                if strict {
                    return Err(Error::EventLog { line: line_no, msg: e.to_string() });
                }
                skipped += 1;
                continue;
            }
        };
        if !seen.insert(record.tweet_id.clone()) {
            if strict {
                return Err(Error::DuplicateTweetId(record.tweet_id));
            }
            skipped += 1;
            continue;
        }
        records.push(record);
    }
    Ok(LoadOutcome { dataset: Dataset::from_records(records)?, skipped })
}

/// Write records as JSON Lines, one record per line, in the given order.
pub fn write_events<W: Write>(records: &[TweetRecord], mut writer: W) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut writer, record)
            .map_err(|e| Error::InvalidConfig(format!("serialize event: {e}")))?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Directed follow graph: each tracked user maps to the set of users they
/// follow. Followees need not be tracked users themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowGraph {
    adjacency: BTreeMap<UserId, BTreeSet<UserId>>,
}

impl FollowGraph {
    pub fn new() -> Self {
        FollowGraph::default()
    }

    /// Register a user with no followees yet.
    pub fn add_user(&mut self, user: UserId) {
        self.adjacency.entry(user).or_default();
    }

    pub fn add_edge(&mut self, follower: UserId, followee: UserId) -> Result<()> {
        if follower == followee {
            return Err(Error::InvalidConfig(format!("self-loop for user {follower}")));
        }
        self.adjacency.entry(follower).or_default().insert(followee);
        Ok(())
    }

    pub fn contains(&self, user: &UserId) -> bool {
        self.adjacency.contains_key(user)
    }

    pub fn followees(&self, user: &UserId) -> Option<&BTreeSet<UserId>> {
        self.adjacency.get(user)
    }

    pub fn users(&self) -> impl Iterator<Item = &UserId> {
        self.adjacency.keys()
    }

    pub fn num_users(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.values().map(BTreeSet::len).sum()
    }
}

/// Read a `follower,followee` CSV with header.
///
/// Malformed rows and self-loops are skipped and counted; in strict mode the
/// first one is fatal. Users appearing only as followees are not tracked.
pub fn load_graph<R: BufRead>(reader: R, strict: bool) -> Result<(FollowGraph, usize)> {
    let mut csv_reader = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let mut graph = FollowGraph::new();
    let mut skipped = 0usize;
    for (idx, row) in csv_reader.records().enumerate() {
        let line_no = idx + 2; // header is line 1
        let row = row.map_err(|e| Error::Graph { line: line_no, msg: e.to_string() })?;
        let valid = row.len() == 2 && !row[0].is_empty() && !row[1].is_empty();
        if !valid {
            if strict {
                return Err(Error::Graph {
                    line: line_no,
                    msg: format!("expected two non-empty fields, got {row:?}"),
                });
            }
            skipped += 1;
            continue;
        }
        let follower = UserId::new(&row[0]);
        let followee = UserId::new(&row[1]);
        if graph.add_edge(follower, followee).is_err() {
            if strict {
                return Err(Error::Graph {
                    line: line_no,
                    msg: format!("self-loop for user {}", &row[0]),
                });
            }
            skipped += 1;
        }
    }
    Ok((graph, skipped))
}

/// Write the graph as a `follower,followee` CSV. Users without followees do
/// not appear; the format has no way to express them.
pub fn write_graph<W: Write>(graph: &FollowGraph, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["follower", "followee"])
        .map_err(|e| Error::InvalidConfig(format!("write graph: {e}")))?;
    for (follower, followees) in &graph.adjacency {
        for followee in followees {
            w.write_record([follower.as_str(), followee.as_str()])
                .map_err(|e| Error::InvalidConfig(format!("write graph: {e}")))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// The stimulus set preceding one target post.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExposureHistory {
    pub target: TweetId,
    /// Stimulus tweet ids, ascending by (timestamp, tweet_id).
    pub stimuli: Vec<TweetId>,
    pub window_seconds: i64,
}

impl ExposureHistory {
    pub fn len(&self) -> usize {
        self.stimuli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stimuli.is_empty()
    }
}

/// Parameters for history construction.
#[derive(Debug, Clone, Copy)]
pub struct HistoryParams {
    pub window_seconds: i64,
    pub min_stimuli: usize,
}

impl Default for HistoryParams {
    fn default() -> Self {
        HistoryParams {
            window_seconds: DEFAULT_WINDOW_SECONDS,
            min_stimuli: DEFAULT_MIN_STIMULI,
        }
    }
}

/// Reconstruct the exposure history for one target post.
///
/// Stimuli are the eligible posts of the target author's followees with
/// timestamps in `[target.timestamp - window_seconds, target.timestamp)`.
/// The target author must be tracked in the graph.
pub fn build_history(
    dataset: &Dataset,
    graph: &FollowGraph,
    target: &TweetRecord,
    window_seconds: i64,
) -> Result<ExposureHistory> {
    let followees = graph
        .followees(&target.author)
        .ok_or_else(|| Error::UnknownUser(target.author.clone()))?;
    let lower = target.timestamp - window_seconds;
    let upper = target.timestamp;
    let mut hits: Vec<(i64, &TweetId)> = Vec::new();
    for followee in followees {
        let posts = dataset.author_posts(followee);
        let start = posts.partition_point(|&i| dataset.records[i].timestamp < lower);
        for &i in &posts[start..] {
            let record = &dataset.records[i];
            if record.timestamp >= upper {
                break;
            }
            if record.is_eligible() && record.tweet_id != target.tweet_id {
                hits.push((record.timestamp, &record.tweet_id));
            }
        }
    }
    hits.sort();
    Ok(ExposureHistory {
        target: target.tweet_id.clone(),
        stimuli: hits.into_iter().map(|(_, id)| id.clone()).collect(),
        window_seconds,
    })
}

/// Build one history per eligible post of a tracked user whose history has at
/// least `min_stimuli` stimuli. Output order is canonical: ascending by the
/// target's (timestamp, tweet_id), so it does not depend on input order.
pub fn qualifying_histories(
    dataset: &Dataset,
    graph: &FollowGraph,
    params: &HistoryParams,
) -> Vec<ExposureHistory> {
    let mut targets: Vec<&TweetRecord> = dataset
        .records
        .iter()
        .filter(|r| r.is_eligible() && graph.contains(&r.author))
        .collect();
    targets.sort_by(|a, b| (a.timestamp, &a.tweet_id).cmp(&(b.timestamp, &b.tweet_id)));
    let mut histories = Vec::new();
    for target in targets {
        // contains() was checked above, so build_history cannot fail.
        let history = build_history(dataset, graph, target, params.window_seconds)
            .expect("tracked author");
        if history.len() >= params.min_stimuli {
            histories.push(history);
        }
    }
    histories
}
