//! Lexical resources: bundled TSV tables, optionally overridden from a
//! directory (see [`LEXICON_DIR_ENV`]).

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, LazyLock};

use thiserror::Error;

use crate::linguistic::{normalize_apostrophes, CoarsePos, MorphTarget, Number, Person, Tense, VerbForm};
use crate::morphology::{ContractionTable, VerbLexicon};

/// Environment variable naming a directory whose files replace the
/// bundled tables of the same name.
pub const LEXICON_DIR_ENV: &str = "NEGFORGE_LEXICON_DIR";

const AUXILIARIES: (&str, &str) = ("auxiliaries.tsv", include_str!("../data/auxiliaries.tsv"));
const NEGATION_CUES: (&str, &str) = ("negation_cues.txt", include_str!("../data/negation_cues.txt"));
const PRONOUNS: (&str, &str) = ("pronouns.tsv", include_str!("../data/pronouns.tsv"));
const SPLITS: (&str, &str) = (
    "contraction_splits.tsv",
    include_str!("../data/contraction_splits.tsv"),
);
const FUNCTION_WORDS: (&str, &str) = ("function_words.tsv", include_str!("../data/function_words.tsv"));
const IRREGULAR: (&str, &str) = ("irregular_verbs.tsv", include_str!("../data/irregular_verbs.tsv"));
const REGULAR: (&str, &str) = ("regular_verbs.tsv", include_str!("../data/regular_verbs.tsv"));
const CONTRACTIONS: (&str, &str) = ("contractions.tsv", include_str!("../data/contractions.tsv"));

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {reason}")]
    Malformed {
        file: String,
        line: usize,
        reason: String,
    },
}

impl LexiconError {
    pub(crate) fn malformed(file: &str, line: usize, reason: impl Into<String>) -> Self {
        LexiconError::Malformed {
            file: file.to_string(),
            line,
            reason: reason.into(),
        }
    }
}

/// Non-empty, non-comment lines split on tabs, with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').map(str::trim).collect()))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxEntry {
    pub lemma: String,
    pub fine_tag: String,
    pub target: MorphTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PronounEntry {
    pub person: Person,
    pub number: Number,
    pub subject: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPiece {
    pub surface: String,
    pub lemma: String,
}

/// Closed-class word lists used by the built-in analyzer.
#[derive(Debug, Clone, Default)]
pub struct Lexicons {
    pub auxiliaries: HashMap<String, AuxEntry>,
    pub negation_cues: HashSet<String>,
    pub pronouns: HashMap<String, PronounEntry>,
    /// Irregular contraction splits ("won't" -> wo + n't); regular clitics
    /// are split by rule in the analyzer.
    pub contraction_splits: HashMap<String, Vec<SplitPiece>>,
    pub function_words: HashMap<String, (CoarsePos, String)>,
}

impl Lexicons {
    pub fn auxiliary(&self, word: &str) -> Option<&AuxEntry> {
        self.auxiliaries
            .get(&normalize_apostrophes(&word.to_lowercase()))
    }

    pub fn is_negation_cue(&self, word: &str) -> bool {
        self.negation_cues
            .contains(&normalize_apostrophes(&word.to_lowercase()))
    }
}

fn parse_tense(s: &str) -> Option<Tense> {
    match s {
        "past" => Some(Tense::Past),
        "present" => Some(Tense::Present),
        _ => None,
    }
}

fn parse_person(s: &str) -> Option<Person> {
    match s {
        "first" => Some(Person::First),
        "second" => Some(Person::Second),
        "third" => Some(Person::Third),
        _ => None,
    }
}

fn parse_number(s: &str) -> Option<Number> {
    match s {
        "singular" => Some(Number::Singular),
        "plural" => Some(Number::Plural),
        _ => None,
    }
}

fn parse_verb_form(s: &str) -> Option<VerbForm> {
    match s {
        "finite" => Some(VerbForm::Finite),
        "bare_infinitive" => Some(VerbForm::BareInfinitive),
        "past_participle" => Some(VerbForm::PastParticiple),
        "gerund" => Some(VerbForm::Gerund),
        _ => None,
    }
}

fn parse_auxiliaries(text: &str) -> Result<HashMap<String, AuxEntry>, LexiconError> {
    let file = AUXILIARIES.0;
    let mut map = HashMap::new();
    for (line, f) in data_lines(text) {
        if f.len() != 7 {
            return Err(LexiconError::malformed(file, line, "expected 7 columns"));
        }
        let bad = |what: &str| LexiconError::malformed(file, line, format!("bad {what}"));
        let target = MorphTarget {
            tense: parse_tense(f[3]).ok_or_else(|| bad("tense"))?,
            person: parse_person(f[4]).ok_or_else(|| bad("person"))?,
            number: parse_number(f[5]).ok_or_else(|| bad("number"))?,
            verb_form: parse_verb_form(f[6]).ok_or_else(|| bad("verb form"))?,
        };
        map.insert(
            normalize_apostrophes(&f[0].to_lowercase()),
            AuxEntry {
                lemma: f[1].to_lowercase(),
                fine_tag: f[2].to_string(),
                target,
            },
        );
    }
    Ok(map)
}

fn parse_pronouns(text: &str) -> Result<HashMap<String, PronounEntry>, LexiconError> {
    let file = PRONOUNS.0;
    let mut map = HashMap::new();
    for (line, f) in data_lines(text) {
        if f.len() != 4 {
            return Err(LexiconError::malformed(file, line, "expected 4 columns"));
        }
        let entry = PronounEntry {
            person: parse_person(f[1])
                .ok_or_else(|| LexiconError::malformed(file, line, "bad person"))?,
            number: parse_number(f[2])
                .ok_or_else(|| LexiconError::malformed(file, line, "bad number"))?,
            subject: match f[3] {
                "subject" => true,
                "object" => false,
                _ => return Err(LexiconError::malformed(file, line, "bad case")),
            },
        };
        map.insert(f[0].to_lowercase(), entry);
    }
    Ok(map)
}

fn parse_splits(text: &str) -> Result<HashMap<String, Vec<SplitPiece>>, LexiconError> {
    let file = SPLITS.0;
    let mut map = HashMap::new();
    for (line, f) in data_lines(text) {
        if f.len() < 3 {
            return Err(LexiconError::malformed(file, line, "expected a surface and at least two pieces"));
        }
        let surface = normalize_apostrophes(&f[0].to_lowercase());
        let mut pieces = Vec::new();
        for piece in &f[1..] {
            let (s, lemma) = piece
                .split_once(':')
                .ok_or_else(|| LexiconError::malformed(file, line, "piece must be surface:lemma"))?;
            pieces.push(SplitPiece {
                surface: s.to_string(),
                lemma: lemma.to_string(),
            });
        }
        let joined: String = pieces.iter().map(|p| p.surface.as_str()).collect();
        if joined != surface {
            return Err(LexiconError::malformed(
                file,
                line,
                format!("pieces join to {joined:?}, not {surface:?}"),
            ));
        }
        map.insert(surface, pieces);
    }
    Ok(map)
}

fn parse_function_words(text: &str) -> Result<HashMap<String, (CoarsePos, String)>, LexiconError> {
    let mut map = HashMap::new();
    for (line, f) in data_lines(text) {
        if f.len() != 3 {
            return Err(LexiconError::malformed(FUNCTION_WORDS.0, line, "expected 3 columns"));
        }
        map.insert(f[0].to_lowercase(), (CoarsePos::parse(f[1]), f[2].to_string()));
    }
    Ok(map)
}

/// All tables the analyzer, morphology and negator consult.
#[derive(Debug, Clone)]
pub struct Resources {
    pub lexicons: Lexicons,
    pub verbs: VerbLexicon,
    pub contractions: ContractionTable,
}

static BUNDLED: LazyLock<Arc<Resources>> = LazyLock::new(|| {
    Arc::new(
        Resources::load_with(|name| {
            Ok(bundled_text(name).expect("bundled table").to_string())
        })
        .expect("bundled lexicons are well-formed"),
    )
});

fn bundled_text(name: &str) -> Option<&'static str> {
    [
        AUXILIARIES,
        NEGATION_CUES,
        PRONOUNS,
        SPLITS,
        FUNCTION_WORDS,
        IRREGULAR,
        REGULAR,
        CONTRACTIONS,
    ]
    .into_iter()
    .find(|(n, _)| *n == name)
    .map(|(_, text)| text)
}

impl Resources {
    pub fn bundled() -> &'static Resources {
        &BUNDLED
    }

    pub fn shared() -> Arc<Resources> {
        Arc::clone(&BUNDLED)
    }

    /// Loads tables from `dir`; files that do not exist there fall back to
    /// the bundled copies.
    pub fn from_dir(dir: &Path) -> Result<Resources, LexiconError> {
        Self::load_with(|name| {
            let path = dir.join(name);
            if path.exists() {
                std::fs::read_to_string(&path).map_err(|source| LexiconError::Io { path, source })
            } else {
                Ok(bundled_text(name).unwrap_or_default().to_string())
            }
        })
    }

    /// Bundled resources unless [`LEXICON_DIR_ENV`] names a directory.
    pub fn from_env() -> Result<Arc<Resources>, LexiconError> {
        match std::env::var_os(LEXICON_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Ok(Arc::new(Self::from_dir(Path::new(&dir))?)),
            _ => Ok(Self::shared()),
        }
    }

    fn load_with(
        mut read: impl FnMut(&str) -> Result<String, LexiconError>,
    ) -> Result<Resources, LexiconError> {
        let negation_cues = data_lines(&read(NEGATION_CUES.0)?)
            .map(|(_, f)| normalize_apostrophes(&f[0].to_lowercase()))
            .collect();
        let lexicons = Lexicons {
            auxiliaries: parse_auxiliaries(&read(AUXILIARIES.0)?)?,
            negation_cues,
            pronouns: parse_pronouns(&read(PRONOUNS.0)?)?,
            contraction_splits: parse_splits(&read(SPLITS.0)?)?,
            function_words: parse_function_words(&read(FUNCTION_WORDS.0)?)?,
        };
        let verbs = VerbLexicon::from_tsv(&read(IRREGULAR.0)?, &read(REGULAR.0)?)?;
        let contractions = ContractionTable::from_tsv(&read(CONTRACTIONS.0)?)?;
        Ok(Resources {
            lexicons,
            verbs,
            contractions,
        })
    }
}
