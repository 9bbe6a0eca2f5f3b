//! Corpus ingestion: raw documents, text cleaning, and term counting.
//!
//! Tokenization is deliberately plain — Unicode case folding, then splitting
//! on anything that is not a letter (or digit, when numeric tokens are kept).
//! The downstream weighting only needs stable bag-of-words counts, so there
//! is no stemming and no attempt at linguistic segmentation.
//!
//! Case handling uses full case folding rather than `to_lowercase`, so that
//! e.g. `Straße` and `STRASSE` produce the same token and re-tokenizing
//! already-cleaned output is a no-op.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::Path;

/// Whether a document is an individual speaker's collected remarks or the
/// consensus record the speakers are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocRole {
    Speaker,
    Consensus,
}

/// A document as loaded from disk, before any cleaning.
#[derive(Debug, Clone)]
pub struct RawDocument {
    pub id: String,
    pub role: DocRole,
    pub date_label: String,
    pub text: String,
}

/// Controls for [`clean_and_tokenize`].
///
/// `stopwords` and `extra_drop_patterns` are matched case-insensitively
/// (both sides are case folded). Patterns are removed from the text before
/// splitting, so a pattern may delete punctuation or multi-word phrases;
/// each removal leaves a space so neighbouring words are never fused.
#[derive(Debug, Clone)]
pub struct CleaningConfig {
    pub stopwords: BTreeSet<String>,
    pub min_token_length: usize,
    pub drop_numeric: bool,
    pub extra_drop_patterns: Vec<String>,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig {
            stopwords: BTreeSet::new(),
            min_token_length: 2,
            drop_numeric: true,
            extra_drop_patterns: Vec::new(),
        }
    }
}

/// Cleans `text` and splits it into tokens.
///
/// Steps, in order: case fold the whole text, strip every occurrence of the
/// (folded) drop patterns, split on non-token characters, then drop tokens
/// shorter than `min_token_length` and tokens in the stopword set.
pub fn clean_and_tokenize(text: &str, config: &CleaningConfig) -> Vec<String> {
    let mut folded = caseless::default_case_fold_str(text);
    for pattern in &config.extra_drop_patterns {
        let pattern = caseless::default_case_fold_str(pattern);
        if pattern.is_empty() {
            continue;
        }
        folded = folded.replace(&pattern, " ");
    }
    let keep = |c: char| c.is_alphabetic() || (!config.drop_numeric && c.is_numeric());
    folded
        .split(|c: char| !keep(c))
        .filter(|tok| !tok.is_empty())
        .filter(|tok| tok.chars().count() >= config.min_token_length)
        .filter(|tok| !config.stopwords.contains(*tok))
        .map(str::to_owned)
        .collect()
}

/// Bag-of-words counts for one document. Terms with a zero count are never
/// stored, and iteration order is the lexicographic term order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermCounts {
    counts: BTreeMap<String, u64>,
}

impl TermCounts {
    pub fn get(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.counts.iter().map(|(term, &count)| (term.as_str(), count))
    }

    /// Number of distinct terms.
    pub fn distinct_terms(&self) -> usize {
        self.counts.len()
    }

    /// Sum of all counts (the token count of the cleaned document).
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl FromIterator<(String, u64)> for TermCounts {
    fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
        let mut counts = BTreeMap::new();
        for (term, count) in iter {
            if count > 0 {
                *counts.entry(term).or_insert(0) += count;
            }
        }
        TermCounts { counts }
    }
}

/// Counts token occurrences.
pub fn count_terms<S: AsRef<str>>(tokens: &[S]) -> TermCounts {
    let mut counts = BTreeMap::new();
    for tok in tokens {
        *counts.entry(tok.as_ref().to_owned()).or_insert(0) += 1;
    }
    TermCounts { counts }
}

/// Reads a stopword file: one word per line, `#` comments and blank lines
/// ignored, entries case folded.
pub fn load_stopwords(path: &Path) -> io::Result<BTreeSet<String>> {
    Ok(parse_stopwords(&fs::read_to_string(path)?))
}

pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(caseless::default_case_fold_str)
        .collect()
}
