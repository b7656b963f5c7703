//! Negated-pair dataset construction: filtering, negation, paraphrase
//! attachment, swap augmentation, WMT merging and splitting.

pub mod build;
pub mod io;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analyzer::Analyzer;
use crate::engine::TextNegator;

pub use build::{build_cannot_wmt, BuildConfig, BuildReport, DatasetBundle};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("source {name}: file not found: {path}")]
    MissingSource { name: String, path: PathBuf },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("no paraphrase for reference {0:?}")]
    MissingParaphrase(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    NanNli,
    WikiFactcheck,
    GlueDiag,
    Sentiment,
    Wmt,
    Other,
}

impl Source {
    pub const ALL: [Source; 6] = [
        Source::NanNli,
        Source::WikiFactcheck,
        Source::GlueDiag,
        Source::Sentiment,
        Source::Wmt,
        Source::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Source::NanNli => "nan_nli",
            Source::WikiFactcheck => "wiki_factcheck",
            Source::GlueDiag => "glue_diag",
            Source::Sentiment => "sentiment",
            Source::Wmt => "wmt",
            Source::Other => "other",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Source::ALL
            .into_iter()
            .find(|src| src.as_str() == s)
            .ok_or_else(|| DatasetError::InvalidArgument(format!("unknown source {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Dev,
    Test,
    Unassigned,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
            Split::Unassigned => "unassigned",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Split::Train, Split::Dev, Split::Test, Split::Unassigned]
            .into_iter()
            .find(|sp| sp.as_str() == s)
            .ok_or_else(|| DatasetError::InvalidArgument(format!("unknown split {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentencePair {
    pub reference: String,
    pub candidate: String,
    pub score: f64,
    pub source: Source,
    pub split: Split,
}

impl SentencePair {
    pub fn new(reference: impl Into<String>, candidate: impl Into<String>, score: f64, source: Source) -> Self {
        SentencePair {
            reference: reference.into(),
            candidate: candidate.into(),
            score,
            source,
            split: Split::Unassigned,
        }
    }

    pub fn swapped(&self) -> Self {
        SentencePair {
            reference: self.candidate.clone(),
            candidate: self.reference.clone(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub min_jaccard: f64,
    /// Largest word-count difference that is kept.
    pub max_length_diff_words: usize,
    pub max_words: usize,
    pub require_auxiliary: bool,
    pub wmt_min_score_exclusive: f64,
    pub dedup_exact: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_jaccard: 0.55,
            max_length_diff_words: 3,
            max_words: 33,
            require_auxiliary: true,
            wmt_min_score_exclusive: -1.0,
            dedup_exact: false,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if !(0.0..=1.0).contains(&self.min_jaccard) {
            return Err(DatasetError::Config(format!(
                "min_jaccard must be within [0, 1], got {}",
                self.min_jaccard
            )));
        }
        if !self.wmt_min_score_exclusive.is_finite() {
            return Err(DatasetError::Config("wmt_min_score_exclusive must be finite".into()));
        }
        Ok(())
    }
}

pub fn whitespace_tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Jaccard coefficient of the two word sets; 1 when both are empty.
pub fn jaccard<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> f64 {
    let sa: HashSet<&str> = a.iter().map(AsRef::as_ref).collect();
    let sb: HashSet<&str> = b.iter().map(AsRef::as_ref).collect();
    if sa.is_empty() && sb.is_empty() {
        return 1.0;
    }
    let inter = sa.intersection(&sb).count();
    let union = sa.len() + sb.len() - inter;
    inter as f64 / union as f64
}

pub fn filter_pair(pair: &SentencePair, cfg: &FilterConfig) -> bool {
    let r = whitespace_tokenize(&pair.reference);
    let c = whitespace_tokenize(&pair.candidate);
    jaccard(&r, &c) >= cfg.min_jaccard && r.len().abs_diff(c.len()) <= cfg.max_length_diff_words
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegationReport {
    pub attempted: usize,
    pub negated: usize,
    pub gated_too_long: usize,
    pub gated_no_auxiliary: usize,
    pub failed: usize,
    /// First few failure messages.
    pub failure_samples: Vec<String>,
}

const FAILURE_SAMPLES: usize = 20;

/// Negates each sentence into a score-0 pair. With `apply_gates` the
/// word-count and auxiliary gates of `cfg` apply first. Failures are
/// counted and skipped.
pub fn build_negated_pairs<S: AsRef<str>>(
    sentences: &[S],
    cfg: &FilterConfig,
    apply_gates: bool,
    source: Source,
    negator: &dyn TextNegator,
    analyzer: &Analyzer,
) -> (Vec<SentencePair>, NegationReport) {
    let mut report = NegationReport::default();
    let mut pairs = Vec::new();
    for sentence in sentences {
        let sentence = sentence.as_ref().trim();
        report.attempted += 1;
        if apply_gates {
            if whitespace_tokenize(sentence).len() > cfg.max_words {
                report.gated_too_long += 1;
                continue;
            }
            if cfg.require_auxiliary && !analyzer.has_auxiliary(sentence) {
                report.gated_no_auxiliary += 1;
                continue;
            }
        }
        match negator.negate_text(sentence) {
            Ok(outcome) => {
                report.negated += 1;
                pairs.push(SentencePair::new(sentence, outcome.text, 0.0, source));
            }
            Err(e) => {
                log::debug!("skipping {sentence:?}: {e}");
                report.failed += 1;
                if report.failure_samples.len() < FAILURE_SAMPLES {
                    report.failure_samples.push(format!("{sentence}: {e}"));
                }
            }
        }
    }
    if report.failed > 0 {
        log::info!("{source}: {} of {} sentences could not be negated", report.failed, report.attempted);
    }
    (pairs, report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    #[default]
    Error,
    Skip,
}

/// Appends one score-1 pair per distinct reference, in order of first
/// appearance. Returns the extended list and the number of references that
/// had no paraphrase (only non-zero under [`MissingPolicy::Skip`]).
pub fn attach_paraphrases(
    pairs: Vec<SentencePair>,
    paraphrases: &HashMap<String, String>,
    policy: MissingPolicy,
) -> Result<(Vec<SentencePair>, usize), DatasetError> {
    let mut seen = HashSet::new();
    let mut added = Vec::new();
    let mut missing = 0;
    for pair in &pairs {
        if !seen.insert(pair.reference.as_str()) {
            continue;
        }
        match paraphrases.get(&pair.reference) {
            Some(p) => added.push(SentencePair::new(pair.reference.clone(), p.clone(), 1.0, pair.source)),
            None if policy == MissingPolicy::Skip => missing += 1,
            None => return Err(DatasetError::MissingParaphrase(pair.reference.clone())),
        }
    }
    if missing > 0 {
        log::warn!("{missing} references have no paraphrase");
    }
    let mut out = pairs;
    out.extend(added);
    Ok((out, missing))
}

/// Input followed by every pair with reference and candidate exchanged.
pub fn swap_augment(pairs: Vec<SentencePair>) -> Vec<SentencePair> {
    let swapped: Vec<SentencePair> = pairs.iter().map(SentencePair::swapped).collect();
    let mut out = pairs;
    out.extend(swapped);
    out
}

/// Drops later pairs whose (reference, candidate) already occurred.
pub fn dedup_exact(pairs: Vec<SentencePair>) -> Vec<SentencePair> {
    let mut seen = HashSet::new();
    pairs
        .into_iter()
        .filter(|p| seen.insert((p.reference.clone(), p.candidate.clone())))
        .collect()
}

/// A WMT judgement with its score still in textual form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredRecord {
    pub reference: String,
    pub candidate: String,
    pub score: String,
    /// Location for error reports, e.g. "wmt.tsv:12".
    pub origin: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WmtReport {
    pub read: usize,
    pub kept: usize,
    pub below_threshold: usize,
    pub rejected: Vec<String>,
}

/// Keeps records scoring strictly above the configured threshold.
pub fn merge_wmt(records: &[ScoredRecord], cfg: &FilterConfig) -> (Vec<SentencePair>, WmtReport) {
    let mut report = WmtReport::default();
    let mut out = Vec::new();
    for r in records {
        report.read += 1;
        let score = match r.score.trim().parse::<f64>() {
            Ok(s) if s.is_finite() => s,
            _ => {
                report.rejected.push(format!("{}: non-numeric score {:?}", r.origin, r.score));
                continue;
            }
        };
        if r.reference.trim().is_empty() || r.candidate.trim().is_empty() {
            report.rejected.push(format!("{}: empty text", r.origin));
            continue;
        }
        if score > cfg.wmt_min_score_exclusive {
            report.kept += 1;
            out.push(SentencePair::new(r.reference.clone(), r.candidate.clone(), score, Source::Wmt));
        } else {
            report.below_threshold += 1;
        }
    }
    (out, report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub train: Vec<SentencePair>,
    pub dev: Vec<SentencePair>,
    pub test: Vec<SentencePair>,
}

pub const DEFAULT_RATIOS: [u32; 3] = [80, 10, 10];

/// Seeded shuffle followed by contiguous slicing. Dev and test sizes are
/// floored; the remainder goes to train.
pub fn split_dataset(
    mut pairs: Vec<SentencePair>,
    ratios: [u32; 3],
    seed: u64,
) -> Result<SplitResult, DatasetError> {
    if ratios.iter().sum::<u32>() != 100 {
        return Err(DatasetError::InvalidArgument(format!(
            "split ratios must sum to 100, got {ratios:?}"
        )));
    }
    let n = pairs.len();
    let dev_len = n * ratios[1] as usize / 100;
    let test_len = n * ratios[2] as usize / 100;
    let train_len = n - dev_len - test_len;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    let mut test = pairs.split_off(train_len + dev_len);
    let mut dev = pairs.split_off(train_len);
    let mut train = pairs;
    for (part, split) in [(&mut train, Split::Train), (&mut dev, Split::Dev), (&mut test, Split::Test)] {
        for p in part.iter_mut() {
            p.split = split;
        }
    }
    Ok(SplitResult { train, dev, test })
}
