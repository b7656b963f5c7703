//! Graded, seeded candidate perturbations.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::engine::TextNegator;
use crate::lexicon::Resources;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    WordSwap,
    WordDrop,
    Repetition,
    Negation,
}

impl PerturbationKind {
    pub const ALL: [PerturbationKind; 4] = [
        PerturbationKind::WordSwap,
        PerturbationKind::WordDrop,
        PerturbationKind::Repetition,
        PerturbationKind::Negation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PerturbationKind::WordSwap => "word_swap",
            PerturbationKind::WordDrop => "word_drop",
            PerturbationKind::Repetition => "repetition",
            PerturbationKind::Negation => "negation",
        }
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PerturbationKind {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| EvalError::InvalidArgument(format!("unknown perturbation {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbedItem {
    pub reference: String,
    pub candidate: String,
    pub perturbed: String,
    pub kind: PerturbationKind,
    pub degree: usize,
}

/// A perturbed text, flagged when fewer edits than requested were possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub text: String,
    pub applied: usize,
    pub capped: bool,
}

#[derive(Clone, Copy, Default)]
pub struct PerturbOptions<'a> {
    /// Restrict word drops to content words.
    pub content_words_only: bool,
    pub negator: Option<&'a dyn TextNegator>,
}

impl fmt::Debug for PerturbOptions<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerturbOptions")
            .field("content_words_only", &self.content_words_only)
            .field("negator", &self.negator.is_some())
            .finish()
    }
}

/// Mixes a run seed with an item position so items perturb independently.
pub fn item_seed(seed: u64, index: usize, degree: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (degree as u64).rotate_left(32);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn is_content_word(word: &str) -> bool {
    let lex = &Resources::bundled().lexicons;
    let core: String = word
        .trim_matches(|c: char| !c.is_alphanumeric() && c != '\'')
        .to_lowercase();
    !core.is_empty()
        && !lex.function_words.contains_key(&core)
        && !lex.pronouns.contains_key(&core)
        && lex.auxiliary(&core).is_none()
        && !lex.is_negation_cue(&core)
}

pub fn perturb(
    candidate: &str,
    kind: PerturbationKind,
    degree: usize,
    seed: u64,
    options: &PerturbOptions<'_>,
) -> Result<Perturbation, EvalError> {
    if degree == 0 {
        return Err(EvalError::InvalidArgument("perturbation degree must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<&str> = candidate.split_whitespace().collect();
    let unavailable = |what: &str| EvalError::PerturbationFailed(format!("{what}: {candidate:?}"));
    let (applied, capped) = match kind {
        PerturbationKind::Negation => {
            if degree != 1 {
                return Err(EvalError::InvalidArgument("negation only has degree 1".into()));
            }
            let negator = options
                .negator
                .ok_or_else(|| EvalError::InvalidArgument("negation needs a negator".into()))?;
            let out = negator
                .negate_text(candidate)
                .map_err(|e| EvalError::PerturbationFailed(e.to_string()))?;
            return Ok(Perturbation {
                text: out.text,
                applied: 1,
                capped: false,
            });
        }
        PerturbationKind::WordSwap => {
            // disjoint pairs of differing neighbours, so every swap is visible
            let mut positions: Vec<usize> = (0..words.len().saturating_sub(1))
                .filter(|&i| words[i] != words[i + 1])
                .collect();
            positions.shuffle(&mut rng);
            let mut chosen: Vec<usize> = Vec::new();
            for p in positions {
                if chosen.len() == degree {
                    break;
                }
                if chosen.iter().all(|&c| c.abs_diff(p) > 1) {
                    chosen.push(p);
                }
            }
            if chosen.is_empty() {
                return Err(unavailable("no adjacent words to swap"));
            }
            for &p in &chosen {
                words.swap(p, p + 1);
            }
            (chosen.len(), chosen.len() < degree)
        }
        PerturbationKind::WordDrop => {
            let mut eligible: Vec<usize> = (0..words.len())
                .filter(|&i| !options.content_words_only || is_content_word(words[i]))
                .collect();
            let limit = eligible.len().min(words.len().saturating_sub(1));
            if limit == 0 {
                return Err(unavailable("no word can be dropped"));
            }
            eligible.shuffle(&mut rng);
            let mut drop: Vec<usize> = eligible.into_iter().take(degree.min(limit)).collect();
            drop.sort_unstable();
            for &i in drop.iter().rev() {
                words.remove(i);
            }
            (drop.len(), drop.len() < degree)
        }
        PerturbationKind::Repetition => {
            if words.is_empty() {
                return Err(unavailable("no word to repeat"));
            }
            let mut positions: Vec<usize> = (0..words.len()).collect();
            positions.shuffle(&mut rng);
            let mut chosen: Vec<usize> = positions.into_iter().take(degree).collect();
            chosen.sort_unstable();
            for &i in chosen.iter().rev() {
                words.insert(i, words[i]);
            }
            (chosen.len(), chosen.len() < degree)
        }
    };
    Ok(Perturbation {
        text: words.join(" "),
        applied,
        capped,
    })
}
