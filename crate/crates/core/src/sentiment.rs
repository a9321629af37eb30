//! Lexicon-rule sentiment scoring for short informal text.
//!
//! A [`Lexicon`] holds four disjoint term tables: sentiment terms, booster
//! terms, negation terms, and emoticons. [`Lexicon::score`] tokenizes a text
//! and applies the rule pipeline to produce a [`SentimentScore`] — dual
//! positive/negative strengths on the 1..=5 scale, where 1 means "no signal".
//! The signed difference of the two strengths is the [`Polarity`], which maps
//! onto the three-way [`EmotionClass`].
//!
//! Rule pipeline per matched sentiment token, in order:
//! 1. base strength from the lexicon (magnitude 2..=5);
//! 2. +1 magnitude if the token was elongated (`looove`);
//! 3. magnitude shifted by a booster term immediately preceding it;
//! 4. if a negation term occurs within the two preceding tokens, the token
//!    instead contributes 1 to its own polarity and `min(|base|, 3)` to the
//!    opposite polarity;
//! 5. otherwise the magnitude is clamped to 2..=5.
//!
//! Each side of the score is the maximum contribution over all tokens,
//! defaulting to 1 when nothing contributes. Scoring is pure: a loaded
//! lexicon is immutable and may be shared across threads.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Negation applies to a sentiment token when a negation term occurs within
/// this many preceding tokens.
pub const NEGATION_WINDOW: usize = 2;
/// Magnitude bonus for elongated tokens.
pub const ELONGATION_BONUS: i32 = 1;
/// A negated term contributes at most this much to the opposite polarity.
pub const NEGATED_OPPOSITE_CAP: i32 = 3;
/// Valid magnitude range for sentiment and emoticon strengths.
pub const MIN_STRENGTH: i32 = 2;
pub const MAX_STRENGTH: i32 = 5;

const BUNDLED_LEXICON: &str = include_str!("../data/default_lexicon.tsv");

/// Three-way emotion label, ordered canonically: negative, neutral, positive.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum EmotionClass {
    Negative,
    Neutral,
    Positive,
}

impl EmotionClass {
    pub const ALL: [EmotionClass; 3] =
        [EmotionClass::Negative, EmotionClass::Neutral, EmotionClass::Positive];

    /// Canonical component index: negative 0, neutral 1, positive 2.
    pub fn index(self) -> usize {
        match self {
            EmotionClass::Negative => 0,
            EmotionClass::Neutral => 1,
            EmotionClass::Positive => 2,
        }
    }
}

impl fmt::Display for EmotionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EmotionClass::Negative => "negative",
            EmotionClass::Neutral => "neutral",
            EmotionClass::Positive => "positive",
        };
        f.write_str(s)
    }
}

/// Dual sentiment score: positive and negative strengths, each in 1..=5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentimentScore {
    positive: u8,
    negative: u8,
}

impl SentimentScore {
    /// Score of a text with no sentiment signal at all.
    pub const NEUTRAL: SentimentScore = SentimentScore { positive: 1, negative: 1 };

    pub fn new(positive: u8, negative: u8) -> Result<Self> {
        for v in [positive, negative] {
            if !(1..=5).contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "sentiment strength {v} outside 1..=5"
                )));
            }
        }
        Ok(SentimentScore { positive, negative })
    }

    pub fn positive(&self) -> u8 {
        self.positive
    }

    pub fn negative(&self) -> u8 {
        self.negative
    }

    /// Signed difference between the positive and negative strengths.
    pub fn polarity(&self) -> Polarity {
        Polarity(self.positive as i8 - self.negative as i8)
    }
}

/// Signed polarity in -4..=+4: the positive strength minus the negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Polarity(i8);

impl Polarity {
    pub fn new(value: i8) -> Result<Self> {
        if !(-4..=4).contains(&value) {
            return Err(Error::InvalidConfig(format!("polarity {value} outside -4..=4")));
        }
        Ok(Polarity(value))
    }

    pub fn value(&self) -> i8 {
        self.0
    }

    /// Negative for values <= -1, neutral for 0, positive for values >= 1.
    pub fn classify(&self) -> EmotionClass {
        match self.0 {
            v if v <= -1 => EmotionClass::Negative,
            0 => EmotionClass::Neutral,
            _ => EmotionClass::Positive,
        }
    }
}

/// One token produced by [`tokenize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Lowercased text with character runs of length >= 3 collapsed to one.
    pub text: String,
    /// True when any character of the raw token repeated >= 3 times in a row.
    pub elongated: bool,
}

impl Token {
    fn new(text: impl Into<String>, elongated: bool) -> Self {
        Token { text: text.into(), elongated }
    }
}

/// Collapse character runs of length >= 3 down to a single character.
fn collapse_runs(s: &str) -> (String, bool) {
    let mut out = String::with_capacity(s.len());
    let mut elongated = false;
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        let mut run = 1usize;
        while chars.peek() == Some(&c) {
            chars.next();
            run += 1;
        }
        if run >= 3 {
            elongated = true;
            out.push(c);
        } else {
            for _ in 0..run {
                out.push(c);
            }
        }
    }
    (out, elongated)
}

/// Split a text into scoring tokens.
///
/// Tokens are whitespace-separated. A token made entirely of non-alphanumeric
/// characters is kept verbatim as an emoticon glyph sequence; any other token
/// is lowercased and has trailing punctuation stripped. In both cases a
/// character repeated three or more times in a row is collapsed to a single
/// character and the token is flagged as elongated.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for raw in text.split_whitespace() {
        if raw.chars().all(|c| !c.is_alphanumeric()) {
            let (collapsed, elongated) = collapse_runs(&raw.to_lowercase());
            if !collapsed.is_empty() {
                tokens.push(Token::new(collapsed, elongated));
            }
        } else {
            let lower = raw.to_lowercase();
            let stripped = lower.trim_end_matches(|c: char| !c.is_alphanumeric());
            if stripped.is_empty() {
                continue;
            }
            let (collapsed, elongated) = collapse_runs(stripped);
            tokens.push(Token::new(collapsed, elongated));
        }
    }
    tokens
}

/// Kind tag used in the lexicon file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TermKind {
    Sentiment,
    Booster,
    Negation,
    Emoticon,
}

/// The four term tables driving the scorer.
///
/// Terms are stored lowercase and must be unique across all four tables.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    sentiment_terms: HashMap<String, i8>,
    booster_terms: HashMap<String, i8>,
    negation_terms: HashSet<String>,
    emoticons: HashMap<String, i8>,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    /// The lexicon bundled with the crate (about 200 terms), suitable for
    /// demos, tests, and the synthetic generator.
    pub fn bundled() -> &'static Lexicon {
        static BUNDLED: OnceLock<Lexicon> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            Lexicon::parse(BUNDLED_LEXICON).expect("bundled lexicon is valid")
        })
    }

    fn check_new_term(&self, term: &str) -> Result<String> {
        let term = term.to_lowercase();
        if term.is_empty() {
            return Err(Error::InvalidConfig("empty lexicon term".into()));
        }
        if term.chars().any(char::is_whitespace) {
            return Err(Error::InvalidConfig(format!(
                "lexicon term {term:?} contains whitespace"
            )));
        }
        if self.contains_term(&term) {
            return Err(Error::InvalidConfig(format!(
                "lexicon term {term:?} already present"
            )));
        }
        Ok(term)
    }

    fn contains_term(&self, term: &str) -> bool {
        self.sentiment_terms.contains_key(term)
            || self.booster_terms.contains_key(term)
            || self.negation_terms.contains(term)
            || self.emoticons.contains_key(term)
    }

    pub fn add_sentiment(&mut self, term: &str, strength: i8) -> Result<()> {
        let magnitude = (strength as i32).abs();
        if !(MIN_STRENGTH..=MAX_STRENGTH).contains(&magnitude) {
            return Err(Error::InvalidConfig(format!(
                "sentiment strength {strength} for {term:?}: |s| must be in 2..=5"
            )));
        }
        let term = self.check_new_term(term)?;
        self.sentiment_terms.insert(term, strength);
        Ok(())
    }

    pub fn add_booster(&mut self, term: &str, shift: i8) -> Result<()> {
        if !(-2..=2).contains(&shift) {
            return Err(Error::InvalidConfig(format!(
                "booster shift {shift} for {term:?}: must be in -2..=2"
            )));
        }
        let term = self.check_new_term(term)?;
        self.booster_terms.insert(term, shift);
        Ok(())
    }

    pub fn add_negation(&mut self, term: &str) -> Result<()> {
        let term = self.check_new_term(term)?;
        self.negation_terms.insert(term);
        Ok(())
    }

    pub fn add_emoticon(&mut self, glyphs: &str, strength: i8) -> Result<()> {
        let magnitude = (strength as i32).abs();
        if !(MIN_STRENGTH..=MAX_STRENGTH).contains(&magnitude) {
            return Err(Error::InvalidConfig(format!(
                "emoticon strength {strength} for {glyphs:?}: |s| must be in 2..=5"
            )));
        }
        let glyphs = self.check_new_term(glyphs)?;
        self.emoticons.insert(glyphs, strength);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.sentiment_terms.is_empty()
            && self.booster_terms.is_empty()
            && self.negation_terms.is_empty()
            && self.emoticons.is_empty()
    }

    /// Total number of terms across all four tables.
    pub fn len(&self) -> usize {
        self.sentiment_terms.len()
            + self.booster_terms.len()
            + self.negation_terms.len()
            + self.emoticons.len()
    }

    /// Parse the tab-separated lexicon format.
    ///
    /// One term per line: `term<TAB>kind<TAB>value` with kind one of `sent`,
    /// `boost`, `neg`, `emo`. Negation lines carry value 0. Lines starting
    /// with `#` and blank lines are ignored.
    pub fn parse(src: &str) -> Result<Self> {
        let mut lexicon = Lexicon::new();
        for (idx, raw_line) in src.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (term, kind, value) = match (fields.next(), fields.next(), fields.next()) {
                (Some(t), Some(k), Some(v)) if fields.next().is_none() => (t, k, v),
                _ => {
                    return Err(Error::Lexicon {
                        line: line_no,
                        msg: format!("expected `term<TAB>kind<TAB>value`, got {line:?}"),
                    })
                }
            };
            let kind = match kind {
                "sent" => TermKind::Sentiment,
                "boost" => TermKind::Booster,
                "neg" => TermKind::Negation,
                "emo" => TermKind::Emoticon,
                other => {
                    return Err(Error::Lexicon {
                        line: line_no,
                        msg: format!("unknown kind {other:?}"),
                    })
                }
            };
            let value: i8 = value.trim().parse().map_err(|_| Error::Lexicon {
                line: line_no,
                msg: format!("value {value:?} is not a small integer"),
            })?;
            let result = match kind {
                TermKind::Sentiment => lexicon.add_sentiment(term, value),
                TermKind::Booster => lexicon.add_booster(term, value),
                TermKind::Negation => {
                    if value != 0 {
                        Err(Error::InvalidConfig("negation lines carry value 0".into()))
                    } else {
                        lexicon.add_negation(term)
                    }
                }
                TermKind::Emoticon => lexicon.add_emoticon(term, value),
            };
            result.map_err(|e| Error::Lexicon { line: line_no, msg: e.to_string() })?;
        }
        Ok(lexicon)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        Lexicon::parse(&src)
    }

    /// Raw strength of a token, from the sentiment or emoticon table.
    fn term_strength(&self, token: &str) -> Option<i8> {
        self.sentiment_terms
            .get(token)
            .or_else(|| self.emoticons.get(token))
            .copied()
    }

    /// Score a text. See the module docs for the rule pipeline.
    pub fn score(&self, text: &str) -> SentimentScore {
        self.score_tokens(&tokenize(text))
    }

    /// Score an already-tokenized text.
    pub fn score_tokens(&self, tokens: &[Token]) -> SentimentScore {
        let mut best_positive: i32 = 1;
        let mut best_negative: i32 = 1;
        for (i, token) in tokens.iter().enumerate() {
            let Some(base) = self.term_strength(&token.text) else {
                continue;
            };
            let base = base as i32;
            let is_positive = base > 0;
            let mut magnitude = base.abs();
            if token.elongated {
                magnitude += ELONGATION_BONUS;
            }
            if i >= 1 {
                if let Some(&shift) = self.booster_terms.get(tokens[i - 1].text.as_str()) {
                    magnitude += shift as i32;
                }
            }
            let negated = (1..=NEGATION_WINDOW)
                .any(|k| i >= k && self.negation_terms.contains(tokens[i - k].text.as_str()));
            if negated {
                // A negated term keeps only the neutral floor (1) on its own
                // side and flips a dampened strength to the opposite side.
                let flipped = base.abs().min(NEGATED_OPPOSITE_CAP);
                if is_positive {
                    best_negative = best_negative.max(flipped);
                } else {
                    best_positive = best_positive.max(flipped);
                }
            } else {
                let clamped = magnitude.clamp(MIN_STRENGTH, MAX_STRENGTH);
                if is_positive {
                    best_positive = best_positive.max(clamped);
                } else {
                    best_negative = best_negative.max(clamped);
                }
            }
        }
        SentimentScore { positive: best_positive as u8, negative: best_negative as u8 }
    }

    /// Score and classify in one step.
    pub fn classify(&self, text: &str) -> EmotionClass {
        self.score(text).polarity().classify()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toy_lexicon() -> Lexicon {
        let mut lex = Lexicon::new();
        lex.add_sentiment("love", 3).unwrap();
        lex.add_sentiment("hate", -4).unwrap();
        lex.add_sentiment("nice", 2).unwrap();
        lex.add_sentiment("awful", -4).unwrap();
        lex.add_booster("very", 1).unwrap();
        lex.add_booster("slightly", -1).unwrap();
        lex.add_negation("not").unwrap();
        lex.add_emoticon(":)", 3).unwrap();
        lex.add_emoticon(":(", -3).unwrap();
        lex
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t \n").is_empty());
    }

    #[test]
    fn tokenize_elongation_and_emoticons() {
        let tokens = tokenize("I LOOOVE this :)");
        assert_eq!(
            tokens,
            vec![
                Token::new("i", false),
                Token::new("love", true),
                Token::new("this", false),
                Token::new(":)", false),
            ]
        );
    }

    #[test]
    fn tokenize_strips_trailing_punctuation() {
        assert_eq!(
            tokenize("not bad."),
            vec![Token::new("not", false), Token::new("bad", false)]
        );
    }

    #[test]
    fn tokenize_collapses_emoticon_runs() {
        let tokens = tokenize(":)))");
        assert_eq!(tokens, vec![Token::new(":)", true)]);
    }

    #[test]
    fn tokenize_pure_punctuation_token() {
        assert_eq!(tokenize("..."), vec![Token::new(".", true)]);
    }

    #[test]
    fn score_no_matches_is_neutral() {
        let lex = toy_lexicon();
        assert_eq!(lex.score("completely unrelated words"), SentimentScore::NEUTRAL);
    }

    #[test]
    fn score_single_term() {
        let lex = toy_lexicon();
        let s = lex.score("I love it");
        assert_eq!((s.positive(), s.negative()), (3, 1));
    }

    #[test]
    fn score_negation_flips_with_cap() {
        let lex = toy_lexicon();
        let s = lex.score("not love");
        assert_eq!((s.positive(), s.negative()), (1, 3));
        // |base| = 4 capped at 3 on the flipped side.
        let s = lex.score("not hate");
        assert_eq!((s.positive(), s.negative()), (3, 1));
    }

    #[test]
    fn score_negation_window_is_two_tokens() {
        let lex = toy_lexicon();
        let s = lex.score("not really love");
        assert_eq!((s.positive(), s.negative()), (1, 3));
        let s = lex.score("not at all love");
        assert_eq!((s.positive(), s.negative()), (3, 1));
    }

    #[test]
    fn score_booster_adjacent_only() {
        let lex = toy_lexicon();
        let s = lex.score("very love");
        assert_eq!(s.positive(), 4);
        let s = lex.score("very much love");
        assert_eq!(s.positive(), 3);
        let s = lex.score("slightly hate");
        assert_eq!(s.negative(), 3);
    }

    #[test]
    fn score_booster_clamps_to_range() {
        let lex = toy_lexicon();
        // nice (+2) slightly (-1) would fall to 1; clamp keeps it at 2.
        let s = lex.score("slightly nice");
        assert_eq!(s.positive(), 2);
        // hate (-4) elongated (+1) stays within 5.
        let s = lex.score("very haaaate");
        assert_eq!(s.negative(), 5);
    }

    #[test]
    fn score_elongation_bonus() {
        let lex = toy_lexicon();
        let s = lex.score("loooove this");
        assert_eq!(s.positive(), 4);
    }

    #[test]
    fn score_emoticons_and_max_aggregation() {
        let lex = toy_lexicon();
        let s = lex.score("nice day :)");
        assert_eq!((s.positive(), s.negative()), (3, 1));
        let s = lex.score("love it but awful service :(");
        assert_eq!((s.positive(), s.negative()), (3, 4));
    }

    #[test]
    fn empty_lexicon_forces_neutral() {
        let lex = Lexicon::new();
        for text in ["love hate :) everything", "", "not very bad"] {
            assert_eq!(lex.score(text), SentimentScore::NEUTRAL);
        }
    }

    #[test]
    fn polarity_examples() {
        let p = SentimentScore::new(5, 1).unwrap().polarity();
        assert_eq!(p.value(), 4);
        let p = SentimentScore::new(1, 5).unwrap().polarity();
        assert_eq!(p.value(), -4);
        let p = SentimentScore::new(3, 3).unwrap().polarity();
        assert_eq!(p.value(), 0);
    }

    #[test]
    fn classify_boundaries() {
        assert_eq!(Polarity::new(-1).unwrap().classify(), EmotionClass::Negative);
        assert_eq!(Polarity::new(0).unwrap().classify(), EmotionClass::Neutral);
        assert_eq!(Polarity::new(4).unwrap().classify(), EmotionClass::Positive);
        assert_eq!(Polarity::new(1).unwrap().classify(), EmotionClass::Positive);
        assert_eq!(Polarity::new(-4).unwrap().classify(), EmotionClass::Negative);
    }

    #[test]
    fn score_bounds_are_invariant() {
        let out_of_range = SentimentScore::new(0, 3);
        assert!(out_of_range.is_err());
        let out_of_range = SentimentScore::new(3, 6);
        assert!(out_of_range.is_err());
    }

    #[test]
    fn lexicon_rejects_duplicates_and_bad_ranges() {
        let mut lex = Lexicon::new();
        lex.add_sentiment("fine", 2).unwrap();
        assert!(lex.add_booster("fine", 1).is_err());
        assert!(lex.add_sentiment("weak", 1).is_err());
        assert!(lex.add_sentiment("huge", 6).is_err());
        assert!(lex.add_booster("mega", 3).is_err());
    }

    #[test]
    fn parse_lexicon_format() {
        let src = "# comment\nlove\tsent\t3\nvery\tboost\t1\nnot\tneg\t0\n:)\temo\t3\n";
        let lex = Lexicon::parse(src).unwrap();
        assert_eq!(lex.len(), 4);
        let s = lex.score("not love");
        assert_eq!((s.positive(), s.negative()), (1, 3));
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(Lexicon::parse("love\tsent\n").is_err());
        assert!(Lexicon::parse("love\tfoo\t3\n").is_err());
        assert!(Lexicon::parse("love\tsent\tthree\n").is_err());
        assert!(Lexicon::parse("not\tneg\t2\n").is_err());
        assert!(Lexicon::parse("love\tsent\t3\nlove\tsent\t3\n").is_err());
    }

    #[test]
    fn bundled_lexicon_loads_and_scores() {
        let lex = Lexicon::bundled();
        assert!(lex.len() >= 200, "bundled lexicon has {} terms", lex.len());
        assert_eq!(lex.classify("what a great day"), EmotionClass::Positive);
        assert_eq!(lex.classify("this is sad"), EmotionClass::Negative);
        assert_eq!(lex.classify("the train leaves at noon"), EmotionClass::Neutral);
    }

    proptest! {
        #[test]
        fn score_always_within_bounds(text in ".{0,200}") {
            let s = Lexicon::bundled().score(&text);
            prop_assert!((1..=5).contains(&s.positive()));
            prop_assert!((1..=5).contains(&s.negative()));
        }

        #[test]
        fn polarity_is_antisymmetric(a in 1u8..=5, b in 1u8..=5) {
            let p_ab = SentimentScore::new(a, b).unwrap().polarity().value();
            let p_ba = SentimentScore::new(b, a).unwrap().polarity().value();
            prop_assert_eq!(p_ab, -p_ba);
        }

        #[test]
        fn equal_scores_classify_neutral(s in 1u8..=5) {
            let p = SentimentScore::new(s, s).unwrap().polarity();
            prop_assert_eq!(p.classify(), EmotionClass::Neutral);
        }
    }
}
