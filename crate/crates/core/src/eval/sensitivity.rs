//! Metric sensitivity to perturbations and agreement with gold scores.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::perturb::{item_seed, perturb, PerturbOptions, PerturbationKind};
use super::scorer::{score_pairs, Scorer, DEFAULT_BATCH_SIZE};
use super::stats::spearman;
use super::EvalError;
use crate::dataset::SentencePair;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusItem {
    pub reference: String,
    pub candidate: String,
    /// Optional gold judgement for the unperturbed pair.
    pub label: Option<f64>,
}

impl CorpusItem {
    pub fn new(reference: impl Into<String>, candidate: impl Into<String>) -> Self {
        CorpusItem {
            reference: reference.into(),
            candidate: candidate.into(),
            label: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityConfig {
    pub kinds: Vec<PerturbationKind>,
    pub degrees: Vec<usize>,
    pub seed: u64,
    pub content_words_only: bool,
    pub batch_size: usize,
    pub max_error_fraction: f64,
}

impl Default for SensitivityConfig {
    fn default() -> Self {
        SensitivityConfig {
            kinds: PerturbationKind::ALL.to_vec(),
            degrees: vec![1, 2, 3],
            seed: 0,
            content_words_only: false,
            batch_size: DEFAULT_BATCH_SIZE,
            max_error_fraction: 0.0,
        }
    }
}

impl SensitivityConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return Err(EvalError::InvalidArgument("degrees must be positive".into()));
        }
        if self.kinds.is_empty() {
            return Err(EvalError::InvalidArgument("no perturbation kinds".into()));
        }
        Ok(())
    }

    /// (kind, degree) cells in report order; negation only has degree 1.
    pub fn cells(&self) -> Vec<(PerturbationKind, usize)> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            if kind == PerturbationKind::Negation {
                out.push((kind, 1));
            } else {
                out.extend(self.degrees.iter().map(|&d| (kind, d)));
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Scores for one item under one perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemObservation {
    pub kind: PerturbationKind,
    pub degree: usize,
    pub index: usize,
    pub original: f64,
    pub perturbed: f64,
    pub capped: bool,
}

/// Raw material for a report; shards can be merged before aggregation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SensitivityData {
    pub originals: Vec<(usize, f64)>,
    pub observations: Vec<ItemObservation>,
    pub skipped: Vec<String>,
    pub labels: Vec<(usize, f64)>,
}

impl SensitivityData {
    pub fn merge(&mut self, other: SensitivityData) {
        self.originals.extend(other.originals);
        self.observations.extend(other.observations);
        self.skipped.extend(other.skipped);
        self.labels.extend(other.labels);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityCell {
    pub kind: PerturbationKind,
    pub degree: usize,
    pub item_count: usize,
    pub mean_raw_difference: f64,
    pub normalized_score: f64,
    pub capped_items: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub cells: Vec<SensitivityCell>,
    /// Spread of every score observed in the run, used for normalization.
    pub score_range: f64,
    pub spearman_vs_labels: Option<f64>,
    pub skipped: Vec<String>,
}

/// Scores the originals and all perturbed candidates of `corpus`, whose
/// first item has global position `offset`.
pub fn collect_sensitivity(
    scorer: &mut dyn Scorer,
    corpus: &[CorpusItem],
    offset: usize,
    cfg: &SensitivityConfig,
    options: &PerturbOptions<'_>,
) -> Result<SensitivityData, EvalError> {
    cfg.validate()?;
    let mut data = SensitivityData::default();
    let pairs: Vec<(&str, &str)> = corpus
        .iter()
        .map(|c| (c.reference.as_str(), c.candidate.as_str()))
        .collect();
    let originals = score_pairs(scorer, &pairs, cfg.batch_size, cfg.max_error_fraction)?;
    let mut original_of: Vec<Option<f64>> = Vec::with_capacity(corpus.len());
    for (i, (item, score)) in corpus.iter().zip(originals).enumerate() {
        match score {
            Ok(s) => {
                data.originals.push((offset + i, s));
                original_of.push(Some(s));
                if let Some(label) = item.label {
                    data.labels.push((offset + i, label));
                }
            }
            Err(e) => {
                data.skipped.push(format!("item {}: original not scored: {e}", offset + i));
                original_of.push(None);
            }
        }
    }

    for (kind, degree) in cfg.cells() {
        let mut texts = Vec::new();
        for (i, item) in corpus.iter().enumerate() {
            if original_of[i].is_none() {
                continue;
            }
            let seed = item_seed(cfg.seed, offset + i, degree);
            match perturb(&item.candidate, kind, degree, seed, options) {
                Ok(p) => texts.push((i, p)),
                Err(EvalError::PerturbationFailed(e)) => {
                    data.skipped.push(format!("item {} {kind}/{degree}: {e}", offset + i));
                }
                Err(e) => return Err(e),
            }
        }
        let batch: Vec<(&str, &str)> = texts
            .iter()
            .map(|(i, p)| (corpus[*i].reference.as_str(), p.text.as_str()))
            .collect();
        let scores = score_pairs(scorer, &batch, cfg.batch_size, cfg.max_error_fraction)?;
        for ((i, p), score) in texts.iter().zip(scores) {
            match score {
                Ok(s) => data.observations.push(ItemObservation {
                    kind,
                    degree,
                    index: offset + i,
                    original: original_of[*i].expect("scored above"),
                    perturbed: s,
                    capped: p.capped,
                }),
                Err(e) => data.skipped.push(format!("item {} {kind}/{degree}: {e}", offset + *i)),
            }
        }
    }
    Ok(data)
}

pub fn aggregate(data: &SensitivityData) -> SensitivityReport {
    let all_scores = data
        .originals
        .iter()
        .map(|(_, s)| *s)
        .chain(data.observations.iter().map(|o| o.perturbed));
    let (lo, hi) = all_scores.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
    let range = if hi > lo { hi - lo } else { 0.0 };

    let mut grouped: BTreeMap<(PerturbationKind, usize), Vec<&ItemObservation>> = BTreeMap::new();
    for o in &data.observations {
        grouped.entry((o.kind, o.degree)).or_default().push(o);
    }
    let cells = grouped
        .into_iter()
        .map(|((kind, degree), obs)| {
            let mean = obs.iter().map(|o| o.original - o.perturbed).sum::<f64>() / obs.len() as f64;
            SensitivityCell {
                kind,
                degree,
                item_count: obs.len(),
                mean_raw_difference: mean,
                normalized_score: if range > 0.0 { mean / range } else { 0.0 },
                capped_items: obs.iter().filter(|o| o.capped).count(),
            }
        })
        .collect();

    let spearman_vs_labels = if data.labels.is_empty() {
        None
    } else {
        let originals: BTreeMap<usize, f64> = data.originals.iter().copied().collect();
        let (x, y): (Vec<f64>, Vec<f64>) = data
            .labels
            .iter()
            .filter_map(|(i, l)| originals.get(i).map(|s| (*s, *l)))
            .unzip();
        spearman(&x, &y).ok()
    };
    SensitivityReport {
        cells,
        score_range: range,
        spearman_vs_labels,
        skipped: data.skipped.clone(),
    }
}

pub fn sensitivity(
    scorer: &mut dyn Scorer,
    corpus: &[CorpusItem],
    cfg: &SensitivityConfig,
    options: &PerturbOptions<'_>,
) -> Result<SensitivityReport, EvalError> {
    if corpus.is_empty() {
        return Err(EvalError::InvalidArgument("empty corpus".into()));
    }
    Ok(aggregate(&collect_sensitivity(scorer, corpus, 0, cfg, options)?))
}

pub fn write_sensitivity_csv<W: Write>(out: W, report: &SensitivityReport) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "degree", "item_count", "mean_raw_difference", "normalized_score"])?;
    for c in &report.cells {
        w.write_record([
            c.kind.as_str().to_string(),
            c.degree.to_string(),
            c.item_count.to_string(),
            c.mean_raw_difference.to_string(),
            c.normalized_score.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Spearman correlation of metric scores with gold scores. Pairs the
/// metric failed on are left out.
pub fn evaluate_testset(
    scorer: &mut dyn Scorer,
    pairs: &[SentencePair],
    batch_size: usize,
    max_error_fraction: f64,
) -> Result<f64, EvalError> {
    let requests: Vec<(&str, &str)> = pairs
        .iter()
        .map(|p| (p.reference.as_str(), p.candidate.as_str()))
        .collect();
    let scores = score_pairs(scorer, &requests, batch_size, max_error_fraction)?;
    let (metric, gold): (Vec<f64>, Vec<f64>) = scores
        .iter()
        .zip(pairs)
        .filter_map(|(s, p)| s.as_ref().ok().map(|s| (*s, p.score)))
        .unzip();
    spearman(&metric, &gold)
}
