//! Config-driven construction of the negation dataset merged with WMT
//! judgements.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::io::{read_paraphrases, read_records, write_pairs_file, ColumnMap, InputFormat};
use super::{
    attach_paraphrases, build_negated_pairs, dedup_exact, filter_pair, merge_wmt, split_dataset,
    swap_augment, DatasetError, FilterConfig, MissingPolicy, NegationReport, ScoredRecord,
    SentencePair, Source, Split, SplitResult, WmtReport, DEFAULT_RATIOS,
};
use crate::analyzer::Analyzer;
use crate::engine::TextNegator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    /// Rows already hold (sentence, contradicting sentence).
    #[default]
    Pairs,
    /// Rows hold sentences that the negator turns into pairs.
    Negate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub name: Source,
    pub path: PathBuf,
    #[serde(default)]
    pub format: InputFormat,
    #[serde(default = "yes")]
    pub has_header: bool,
    #[serde(default)]
    pub mode: SourceMode,
    pub columns: ColumnMap,
    /// Keep only rows whose label equals this value (case-insensitive).
    #[serde(default)]
    pub label_filter: Option<String>,
    /// Apply the Jaccard / length filter. Defaults to true for pair
    /// sources and false for negated ones.
    #[serde(default)]
    pub filter: Option<bool>,
    /// Apply the word-count and auxiliary gates before negating.
    #[serde(default)]
    pub gates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParaphraseConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub missing: MissingPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WmtConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: InputFormat,
    #[serde(default = "yes")]
    pub has_header: bool,
    pub columns: ColumnMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionScope {
    /// Excluded sources contribute nothing.
    #[default]
    All,
    /// Splits are drawn from the full data and excluded sources are then
    /// removed from train and dev only, so the test set stays fixed.
    TrainDev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_ratios")]
    pub ratios: [u32; 3],
    #[serde(default)]
    pub filter: FilterConfig,
    #[serde(default)]
    pub exclude: Vec<Source>,
    #[serde(default)]
    pub exclusion_scope: ExclusionScope,
    #[serde(default)]
    pub sources: Vec<SourceConfig>,
    #[serde(default)]
    pub paraphrases: Option<ParaphraseConfig>,
    #[serde(default)]
    pub wmt: Option<WmtConfig>,
}

fn yes() -> bool {
    true
}

fn default_ratios() -> [u32; 3] {
    DEFAULT_RATIOS
}

impl BuildConfig {
    /// Parses a TOML config; relative paths resolve against `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, DatasetError> {
        let mut cfg: BuildConfig = toml::from_str(text).map_err(|e| DatasetError::Config(e.to_string()))?;
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        };
        for s in &mut cfg.sources {
            resolve(&mut s.path);
        }
        if let Some(p) = &mut cfg.paraphrases {
            resolve(&mut p.path);
        }
        if let Some(w) = &mut cfg.wmt {
            resolve(&mut w.path);
        }
        cfg.filter.validate()?;
        if cfg.ratios.iter().sum::<u32>() != 100 {
            return Err(DatasetError::Config(format!("ratios must sum to 100, got {:?}", cfg.ratios)));
        }
        for s in &cfg.sources {
            if s.columns.reference.is_none() {
                return Err(DatasetError::Config(format!("source {}: no reference column", s.name)));
            }
            if s.mode == SourceMode::Pairs && s.columns.candidate.is_none() {
                return Err(DatasetError::Config(format!("source {}: no candidate column", s.name)));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SourceReport {
    pub rows_read: usize,
    pub label_dropped: usize,
    pub filter_dropped: usize,
    /// Score-0 pairs contributed before augmentation.
    pub negated_pairs: usize,
    pub paraphrase_pairs: usize,
    pub missing_paraphrases: usize,
    pub negation: Option<NegationReport>,
    /// Final pairs per split after augmentation and exclusion.
    pub per_split: BTreeMap<Split, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub sources: BTreeMap<Source, SourceReport>,
    pub excluded: Vec<Source>,
    pub negation_pairs_before_augment: usize,
    pub negation_pairs_after_augment: usize,
    pub dedup_removed: usize,
    pub wmt: Option<WmtReport>,
    pub train: usize,
    pub dev: usize,
    pub test: usize,
    /// Share of WMT pairs in the final dataset.
    pub wmt_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub train: Vec<SentencePair>,
    pub dev: Vec<SentencePair>,
    pub test: Vec<SentencePair>,
}

impl DatasetBundle {
    pub fn all(&self) -> impl Iterator<Item = &SentencePair> {
        self.train.iter().chain(&self.dev).chain(&self.test)
    }

    /// Writes `train.tsv`, `dev.tsv` and `test.tsv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), DatasetError> {
        for (name, part) in [("train", &self.train), ("dev", &self.dev), ("test", &self.test)] {
            write_pairs_file(&dir.join(format!("{name}.tsv")), part)?;
        }
        Ok(())
    }
}

fn require_file(name: &str, path: &Path) -> Result<(), DatasetError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(DatasetError::MissingSource {
            name: name.to_string(),
            path: path.to_path_buf(),
        })
    }
}

fn source_pairs(
    src: &SourceConfig,
    cfg: &BuildConfig,
    negator: &dyn TextNegator,
    analyzer: &Analyzer,
    report: &mut SourceReport,
) -> Result<Vec<SentencePair>, DatasetError> {
    require_file(src.name.as_str(), &src.path)?;
    let records = read_records(&src.path, src.format, src.has_header, &src.columns)?;
    report.rows_read = records.len();
    let wanted = src.label_filter.as_deref().map(str::to_lowercase);
    let records: Vec<_> = records
        .into_iter()
        .filter(|r| match &wanted {
            None => true,
            Some(w) => r.label.as_deref().is_some_and(|l| l.trim().to_lowercase() == *w),
        })
        .collect();
    report.label_dropped = report.rows_read - records.len();

    let mut pairs = match src.mode {
        SourceMode::Pairs => records
            .into_iter()
            .filter_map(|r| Some(SentencePair::new(r.reference?, r.candidate?, 0.0, src.name)))
            .filter(|p| !p.reference.is_empty() && !p.candidate.is_empty())
            .collect(),
        SourceMode::Negate => {
            let sentences: Vec<String> = records
                .into_iter()
                .filter_map(|r| r.reference)
                .filter(|s| !s.is_empty())
                .collect();
            let (pairs, neg) = build_negated_pairs(&sentences, &cfg.filter, src.gates, src.name, negator, analyzer);
            report.negation = Some(neg);
            pairs
        }
    };
    let apply_filter = src.filter.unwrap_or(src.mode == SourceMode::Pairs);
    if apply_filter {
        let before = pairs.len();
        pairs.retain(|p| filter_pair(p, &cfg.filter));
        report.filter_dropped = before - pairs.len();
    }
    report.negated_pairs = pairs.len();
    Ok(pairs)
}

/// Runs the whole pipeline. Negation data and WMT data are split
/// separately with the same seed and ratios, then merged split by split.
pub fn build_cannot_wmt(
    cfg: &BuildConfig,
    negator: &dyn TextNegator,
    analyzer: &Analyzer,
) -> Result<(DatasetBundle, BuildReport), DatasetError> {
    let mut report = BuildReport {
        excluded: cfg.exclude.clone(),
        ..BuildReport::default()
    };
    let excluded = |s: Source| cfg.exclude.contains(&s);
    let build_all = cfg.exclusion_scope == ExclusionScope::TrainDev;

    let mut negation = Vec::new();
    for src in &cfg.sources {
        let mut sr = SourceReport::default();
        if !excluded(src.name) || build_all {
            negation.extend(source_pairs(src, cfg, negator, analyzer, &mut sr)?);
        }
        report.sources.entry(src.name).or_default().merge(sr);
    }
    report.negation_pairs_before_augment = negation.len();

    if let Some(p) = &cfg.paraphrases {
        require_file("paraphrases", &p.path)?;
        let map = read_paraphrases(&p.path)?;
        let (with_para, _) = attach_paraphrases(negation, &map, p.missing)?;
        negation = with_para;
        for sr in report.sources.values_mut() {
            sr.paraphrase_pairs = 0;
            sr.missing_paraphrases = 0;
        }
        let mut seen = std::collections::HashSet::new();
        for pair in &negation {
            if pair.score == 0.0 && seen.insert(pair.reference.as_str()) {
                let sr = report.sources.entry(pair.source).or_default();
                if map.contains_key(&pair.reference) {
                    sr.paraphrase_pairs += 1;
                } else {
                    sr.missing_paraphrases += 1;
                }
            }
        }
    }
    negation = swap_augment(negation);
    if cfg.filter.dedup_exact {
        let before = negation.len();
        negation = dedup_exact(negation);
        report.dedup_removed = before - negation.len();
    }
    report.negation_pairs_after_augment = negation.len();

    let SplitResult { train, dev, test } = split_dataset(negation, cfg.ratios, cfg.seed)?;
    let mut bundle = DatasetBundle { train, dev, test };

    if let Some(w) = &cfg.wmt {
        if !excluded(Source::Wmt) || build_all {
            require_file("wmt", &w.path)?;
            let records: Vec<ScoredRecord> = read_records(&w.path, w.format, w.has_header, &w.columns)?
                .into_iter()
                .map(|r| ScoredRecord {
                    origin: format!("{}:{}", w.path.display(), r.line),
                    reference: r.reference.unwrap_or_default(),
                    candidate: r.candidate.unwrap_or_default(),
                    score: r.score.unwrap_or_default(),
                })
                .collect();
            let (wmt, wr) = merge_wmt(&records, &cfg.filter);
            report.wmt = Some(wr);
            let s = split_dataset(wmt, cfg.ratios, cfg.seed)?;
            bundle.train.extend(s.train);
            bundle.dev.extend(s.dev);
            bundle.test.extend(s.test);
        }
    }

    if build_all {
        bundle.train.retain(|p| !excluded(p.source));
        bundle.dev.retain(|p| !excluded(p.source));
    }

    for p in bundle.all() {
        *report
            .sources
            .entry(p.source)
            .or_default()
            .per_split
            .entry(p.split)
            .or_default() += 1;
    }
    report.train = bundle.train.len();
    report.dev = bundle.dev.len();
    report.test = bundle.test.len();
    let total = report.train + report.dev + report.test;
    let wmt_total = bundle.all().filter(|p| p.source == Source::Wmt).count();
    report.wmt_ratio = if total == 0 { 0.0 } else { wmt_total as f64 / total as f64 };
    Ok((bundle, report))
}

impl SourceReport {
    fn merge(&mut self, other: SourceReport) {
        self.rows_read += other.rows_read;
        self.label_dropped += other.label_dropped;
        self.filter_dropped += other.filter_dropped;
        self.negated_pairs += other.negated_pairs;
        if other.negation.is_some() {
            self.negation = other.negation;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::NegationEngine;

    fn write(dir: &Path, name: &str, text: &str) {
        std::fs::write(dir.join(name), text).unwrap();
    }

    fn fixture(dir: &Path, extra: &str) -> BuildConfig {
        write(
            dir,
            "nli.tsv",
            "premise\thypothesis\tlabel\n\
             The cat sat on the mat.\tThe cat did not sit on the mat.\tcontradiction\n\
             The dog ran home.\tThe dog ran home quickly.\tentailment\n\
             A man plays guitar.\tNobody plays anything at all ever again today.\tcontradiction\n",
        );
        write(dir, "sentiment.tsv", "I will be there.\nWow !\nShe can swim.\n");
        write(
            dir,
            "para.tsv",
            "The cat sat on the mat.\tA cat was sitting on the mat.\n\
             I will be there.\tI am going to be there.\n\
             She can swim.\tShe is able to swim.\n",
        );
        write(dir, "wmt.tsv", "ref\tmt\tscore\na\tb\t0.5\nc\td\t-1\ne\tf\tnope\ng\th\t1.2\n");
        let text = format!(
            r#"
seed = 3
{extra}
[[sources]]
name = "nan_nli"
path = "nli.tsv"
columns = {{ reference = "premise", candidate = "hypothesis", label = "label" }}
label_filter = "contradiction"

[[sources]]
name = "sentiment"
path = "sentiment.tsv"
has_header = false
mode = "negate"
gates = true
columns = {{ reference = 0 }}

[paraphrases]
path = "para.tsv"

[wmt]
path = "wmt.tsv"
columns = {{ reference = "ref", candidate = "mt", score = "score" }}
"#
        );
        BuildConfig::from_toml(&text, dir).unwrap()
    }

    #[test]
    fn small_build_end_to_end() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = fixture(dir.path(), "");
        let (bundle, report) =
            build_cannot_wmt(&cfg, &NegationEngine::default(), &Analyzer::default()).unwrap();
        let nli = &report.sources[&Source::NanNli];
        assert_eq!((nli.rows_read, nli.label_dropped, nli.filter_dropped, nli.negated_pairs), (3, 1, 1, 1));
        let sentiment = &report.sources[&Source::Sentiment];
        assert_eq!(sentiment.negated_pairs, 2);
        assert_eq!(sentiment.negation.as_ref().unwrap().gated_no_auxiliary, 1);
        assert_eq!(report.negation_pairs_after_augment, 12);
        let wmt = report.wmt.as_ref().unwrap();
        assert_eq!((wmt.kept, wmt.below_threshold, wmt.rejected.len()), (2, 1, 1));
        assert_eq!(bundle.all().count(), 14);
        let zeros = bundle.all().filter(|p| p.source != Source::Wmt && p.score == 0.0).count();
        let ones = bundle.all().filter(|p| p.source != Source::Wmt && p.score == 1.0).count();
        assert_eq!(zeros, ones);
        assert!(bundle.all().any(|p| p.candidate == "I won't be there."));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"nan_nli\""));
    }

    #[test]
    fn exclusion_removes_source() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = fixture(dir.path(), "exclude = [\"nan_nli\"]");
        let (bundle, report) =
            build_cannot_wmt(&cfg, &NegationEngine::default(), &Analyzer::default()).unwrap();
        assert!(bundle.all().all(|p| p.source != Source::NanNli));
        assert_eq!(report.sources[&Source::NanNli].negated_pairs, 0);
    }

    #[test]
    fn missing_source_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = fixture(dir.path(), "");
        std::fs::remove_file(dir.path().join("sentiment.tsv")).unwrap();
        let err = build_cannot_wmt(&cfg, &NegationEngine::default(), &Analyzer::default()).unwrap_err();
        assert!(err.to_string().contains("sentiment"), "{err}");
    }

    #[test]
    fn bad_config_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(BuildConfig::from_toml("ratios = [50, 50, 50]", dir.path()).is_err());
        assert!(BuildConfig::from_toml("[filter]\nmin_jaccard = 2.0", dir.path()).is_err());
        assert!(BuildConfig::from_toml("bogus = 1", dir.path()).is_err());
        assert_eq!(BuildConfig::from_toml("", dir.path()).unwrap().ratios, DEFAULT_RATIOS);
    }
}
