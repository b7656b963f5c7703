//! Built-in shallow analyzer for simple English declarative clauses.
//!
//! It tokenizes (splitting negative and auxiliary clitics), tags words from
//! the closed-class lexicons, the verb lexicon and suffix heuristics, and
//! builds a flat dependency tree:
//!
//! * the root is the first finite full verb of the main clause, or failing
//!   that the last auxiliary of the first auxiliary chain;
//! * auxiliaries directly preceding the root attach to it as `aux`;
//! * negation cues attach as `neg` to the auxiliary they follow, or to the
//!   root;
//! * everything else attaches to the root as `dep`.
//!
//! Questions, imperatives and verbless fragments are rejected instead of
//! being parsed badly.

use std::sync::Arc;

use thiserror::Error;

use crate::lexicon::{AuxEntry, Resources};
use crate::linguistic::{normalize_apostrophes, CoarsePos, Number, ParsedSentence, Person, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported sentence: {0}")]
    Unsupported(String),
}

const CLITICS: [&str; 6] = ["'m", "'s", "'re", "'ve", "'ll", "'d"];

/// Words that host a verbal "'s" / "'d" rather than a possessive.
const CLITIC_HOSTS: [&str; 17] = [
    "i", "you", "he", "she", "it", "we", "they", "that", "this", "there", "here", "what", "who",
    "where", "how", "when", "why",
];

const ABBREVIATIONS: [&str; 12] = [
    "mr", "mrs", "ms", "dr", "st", "jr", "sr", "vs", "etc", "prof", "inc", "ltd",
];

const LEADING_PUNCT: &[char] = &['"', '(', '[', '{', '\u{201c}', '\u{2018}', '\u{bf}', '\u{a1}'];
const TRAILING_PUNCT: &[char] = &[
    '.', ',', '!', '?', ';', ':', '"', ')', ']', '}', '\u{201d}', '\u{2026}', '%',
];

#[derive(Debug, Clone)]
struct Piece {
    surface: String,
    space_after: bool,
    /// lemma fixed by the contraction table ("wo" -> "will")
    lemma_hint: Option<String>,
    /// set for clitics split off a host word
    host: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Role {
    Aux(AuxEntry),
    Neg,
    Verb,
    Other,
}

#[derive(Debug, Clone)]
struct Word {
    surface: String,
    lower: String,
    space_after: bool,
    lemma: String,
    pos: CoarsePos,
    tag: String,
    role: Role,
    infinitival: bool,
}

impl Word {
    fn is_aux(&self) -> bool {
        matches!(self.role, Role::Aux(_))
    }

    fn aux_lemma(&self) -> Option<&str> {
        match &self.role {
            Role::Aux(entry) => Some(entry.lemma.as_str()),
            _ => None,
        }
    }

    fn is_adverb(&self) -> bool {
        self.pos == CoarsePos::Adv && self.role != Role::Neg
    }

    fn is_punct(&self) -> bool {
        self.pos == CoarsePos::Punct
    }
}

/// Lightweight analyzer backed by the shared lexical resources.
#[derive(Debug, Clone)]
pub struct Analyzer {
    resources: Arc<Resources>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer::new(Resources::shared())
    }
}

impl Analyzer {
    pub fn new(resources: Arc<Resources>) -> Self {
        Analyzer { resources }
    }

    pub fn resources(&self) -> &Resources {
        &self.resources
    }

    pub fn analyze(&self, text: &str) -> Result<ParsedSentence, AnalyzeError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(AnalyzeError::InvalidArgument("empty input".into()));
        }
        let mut words = self.tag(&tokenize(&self.resources, trimmed));
        if words.last().is_some_and(|w| w.surface.contains('?')) {
            return Err(AnalyzeError::Unsupported("questions are not supported".into()));
        }
        self.disambiguate(&mut words);
        let heads = self.attach(&words)?;
        let tokens = words
            .into_iter()
            .zip(heads)
            .enumerate()
            .map(|(i, (w, (head, deprel)))| Token {
                index: i + 1,
                surface: w.surface,
                lemma: w.lemma,
                coarse_pos: w.pos,
                fine_tag: w.tag,
                head,
                deprel: deprel.to_string(),
                space_after: w.space_after,
            })
            .collect();
        ParsedSentence::new(tokens, trimmed)
            .map_err(|e| AnalyzeError::Unsupported(format!("could not build a tree: {e}")))
    }

    /// True iff some word (after clitic splitting) is an auxiliary form.
    /// Possessive "'s" does not count.
    pub fn has_auxiliary(&self, text: &str) -> bool {
        let pieces = tokenize(&self.resources, text.trim());
        self.tag(&pieces).iter().any(Word::is_aux)
    }

    /// Surface tokens exactly as the analyzer splits them.
    pub fn tokenize(&self, text: &str) -> Vec<String> {
        tokenize(&self.resources, text.trim())
            .into_iter()
            .map(|p| p.surface)
            .collect()
    }

    fn lookup_aux(&self, piece_lower: &str, lemma_hint: Option<&str>) -> Option<AuxEntry> {
        let lex = &self.resources.lexicons;
        match lemma_hint {
            Some(lemma) => lex.auxiliary(lemma).cloned(),
            None => lex.auxiliary(piece_lower).cloned(),
        }
    }

    /// Lexical tagging, no context beyond neighbours.
    fn tag(&self, pieces: &[Piece]) -> Vec<Word> {
        let lex = &self.resources.lexicons;
        let verbs = &self.resources.verbs;
        let mut words: Vec<Word> = Vec::with_capacity(pieces.len());
        for (i, piece) in pieces.iter().enumerate() {
            let lower = normalize_apostrophes(&piece.surface.to_lowercase());
            let mut w = Word {
                surface: piece.surface.clone(),
                lower: lower.clone(),
                space_after: piece.space_after,
                lemma: lower.clone(),
                pos: CoarsePos::Noun,
                tag: "NN".into(),
                role: Role::Other,
                infinitival: false,
            };
            let capitalized = piece.surface.chars().next().is_some_and(char::is_uppercase);
            let next_capitalized = pieces
                .get(i + 1)
                .and_then(|p| p.surface.chars().next())
                .is_some_and(char::is_uppercase);

            if is_punctuation(&piece.surface) {
                w.pos = CoarsePos::Punct;
                w.tag = punct_tag(&piece.surface).into();
                w.lemma = piece.surface.clone();
            } else if lex.is_negation_cue(&lower) {
                w.role = Role::Neg;
                w.lemma = if lower == "never" { "never".into() } else { "not".into() };
                w.pos = if lower == "never" { CoarsePos::Adv } else { CoarsePos::Part };
                w.tag = "RB".into();
            } else if capitalized && i > 0 && lower != "i" && piece.host.is_none() {
                self.tag_proper(&mut w);
            } else if let Some(entry) = self.lookup_aux(&lower, piece.lemma_hint.as_deref()) {
                let possessive = lower == "'s"
                    && piece
                        .host
                        .as_deref()
                        .is_some_and(|h| !CLITIC_HOSTS.contains(&h));
                if possessive {
                    w.pos = CoarsePos::Part;
                    w.tag = "POS".into();
                } else {
                    w.pos = CoarsePos::Aux;
                    w.tag = entry.fine_tag.clone();
                    w.lemma = entry.lemma.clone();
                    w.role = Role::Aux(entry);
                }
            } else if let Some(p) = lex.pronouns.get(&lower) {
                w.pos = CoarsePos::Pron;
                w.tag = "PRP".into();
                w.lemma = if lower == "i" { "I".into() } else { lower.clone() };
                let _ = p;
            } else if let Some((pos, tag)) = lex.function_words.get(&lower) {
                w.pos = pos.clone();
                w.tag = tag.clone();
            } else if lower.chars().any(|c| c.is_ascii_digit())
                && lower.chars().all(|c| c.is_ascii_digit() || matches!(c, ',' | '.'))
            {
                w.pos = CoarsePos::Num;
                w.tag = "CD".into();
            } else if capitalized && i == 0 && next_capitalized && !verbs.is_known_form(&lower) {
                self.tag_proper(&mut w);
            } else if verbs.is_known_form(&lower) || looks_verbal(&lower) {
                w.pos = CoarsePos::Verb;
                w.role = Role::Verb;
                w.lemma = verbs.lemmatize_verb(&lower);
                w.tag = "VB".into();
            } else if lower.ends_with('s') && lower.len() > 3 && !lower.ends_with("ss") {
                w.tag = "NNS".into();
            }
            words.push(w);
        }
        words
    }

    fn tag_proper(&self, w: &mut Word) {
        w.pos = CoarsePos::Other("PROPN".into());
        w.tag = "NNP".into();
        w.lemma = w.surface.clone();
    }

    /// Contextual decisions: nouns vs verbs, "'s"/"'d" readings, and
    /// whether have/do/need act as auxiliaries or full verbs.
    fn disambiguate(&self, words: &mut [Word]) {
        let verbs = &self.resources.verbs;
        let lex = &self.resources.lexicons;

        // verb forms right after a determiner or preposition are nominal;
        // unknown words right after a subject pronoun are verbal
        for i in 0..words.len() {
            let prev = previous_content(words, i);
            if words[i].role == Role::Verb {
                if let Some(p) = prev {
                    let determiner_like = |w: &Word| {
                        matches!(w.pos, CoarsePos::Det | CoarsePos::Adp)
                            || w.tag == "POS"
                            || w.tag == "PRP$"
                    };
                    let modified_noun = words[p].pos == CoarsePos::Adj
                        && p > 0
                        && determiner_like(&words[p - 1]);
                    if determiner_like(&words[p]) || modified_noun {
                        words[i].role = Role::Other;
                        words[i].pos = CoarsePos::Noun;
                        words[i].tag = "NN".into();
                        words[i].lemma = words[i].lower.clone();
                    }
                }
            } else if words[i].role == Role::Other
                && words[i].pos == CoarsePos::Noun
                && prev.is_some_and(|p| {
                    lex.pronouns.get(&words[p].lower).is_some_and(|e| e.subject)
                })
            {
                words[i].role = Role::Verb;
                words[i].pos = CoarsePos::Verb;
                words[i].lemma = verbs.lemmatize_verb(&words[i].lower);
            }
        }

        // infinitival "to" shields the following verb from clause roles
        for i in 0..words.len() {
            if let Some(p) = previous_content(words, i) {
                if words[p].tag == "TO" && (words[i].role == Role::Verb || words[i].is_aux()) {
                    words[i].infinitival = true;
                    let lemma = words[i]
                        .aux_lemma()
                        .map(str::to_string)
                        .unwrap_or_else(|| words[i].lemma.clone());
                    words[i].role = Role::Verb;
                    words[i].pos = CoarsePos::Verb;
                    words[i].tag = "VB".into();
                    words[i].lemma = lemma;
                }
            }
        }

        for i in 0..words.len() {
            let Role::Aux(entry) = words[i].role.clone() else {
                continue;
            };
            let next = next_content(words, i);
            let next_word = next.map(|n| words[n].lower.as_str()).unwrap_or("");
            let next_is_verbal = next.is_some_and(|n| words[n].role == Role::Verb || words[n].is_aux());
            match words[i].lower.as_str() {
                "'s" if verbs.is_irregular_past_participle(next_word) => {
                    words[i].role = Role::Aux(self.have_entry("has"));
                    words[i].lemma = "have".into();
                }
                "'d" if verbs.is_past_participle(next_word) => {
                    words[i].role = Role::Aux(self.have_entry("had"));
                    words[i].lemma = "have".into();
                    words[i].tag = "VBD".into();
                }
                _ => {}
            }
            let lemma = words[i].aux_lemma().unwrap_or(&entry.lemma).to_string();
            let acts_as_aux = match lemma.as_str() {
                "have" => next.is_some_and(|n| {
                    words[n].lower == "been" || verbs.is_past_participle(&words[n].lower)
                }) && next.is_some_and(|n| words[n].role == Role::Verb || words[n].lower == "been"),
                "do" => next.is_some_and(|n| {
                    words[n].role == Role::Verb
                        || matches!(words[n].aux_lemma(), Some("have" | "need" | "do"))
                }),
                "need" => next.is_some_and(|n| {
                    (words[n].role == Role::Verb
                        && verbs.is_known_lemma(&words[n].lower))
                        || words[n].lower == "be"
                }),
                _ => true,
            };
            if !acts_as_aux {
                let tag = match &words[i].role {
                    Role::Aux(e) => e.fine_tag.clone(),
                    _ => entry.fine_tag.clone(),
                };
                words[i].role = Role::Verb;
                words[i].pos = CoarsePos::Verb;
                words[i].lemma = lemma;
                words[i].tag = if tag == "MD" { "VBP".into() } else { tag };
            } else if let Role::Aux(e) = &words[i].role {
                words[i].tag = e.fine_tag.clone();
            }
            let _ = next_is_verbal;
        }

        // finite/non-finite tags for full verbs
        for i in 0..words.len() {
            if words[i].role != Role::Verb || words[i].infinitival {
                continue;
            }
            if matches!(words[i].lemma.as_str(), "have" | "do" | "need") && lex.auxiliary(&words[i].lower).is_some() {
                continue;
            }
            words[i].tag = self.verb_tag(words, i);
        }
    }

    fn have_entry(&self, form: &str) -> AuxEntry {
        self.resources
            .lexicons
            .auxiliary(form)
            .cloned()
            .expect("have forms are in the auxiliary lexicon")
    }

    fn verb_tag(&self, words: &[Word], i: usize) -> String {
        let verbs = &self.resources.verbs;
        let lower = &words[i].lower;
        let lemma = &words[i].lemma;
        if let Some(p) = previous_content(words, i) {
            if let Some(aux) = words[p].aux_lemma() {
                return match aux {
                    "have" => "VBN",
                    "be" if lower.ends_with("ing") => "VBG",
                    "be" => "VBN",
                    _ => "VB",
                }
                .into();
            }
        }
        let known = verbs.is_known_lemma(lemma);
        let past = verbs.inflect_verb(lemma, crate::linguistic::MorphTarget::past());
        let third = verbs.inflect_verb(lemma, crate::linguistic::MorphTarget::third_singular());
        let pp = verbs.inflect_verb(
            lemma,
            crate::linguistic::MorphTarget::with_form(crate::linguistic::VerbForm::PastParticiple),
        );
        if known && lower == lemma && lower == &past {
            // put/cut/read: past unless the subject rules it out
            return if self.subject_is_third_singular(words, i) {
                "VBD"
            } else {
                "VBP"
            }
            .into();
        }
        if known && lower == lemma {
            return "VBP".into();
        }
        if known && lower == &third {
            return "VBZ".into();
        }
        if known && lower == &past {
            return "VBD".into();
        }
        if lower.ends_with("ing") {
            return "VBG".into();
        }
        if known && lower == &pp {
            return "VBN".into();
        }
        if lower.ends_with("ed") {
            "VBD".into()
        } else if lower.ends_with('s') && !lower.ends_with("ss") {
            "VBZ".into()
        } else {
            "VBP".into()
        }
    }

    fn subject_is_third_singular(&self, words: &[Word], verb: usize) -> bool {
        let lex = &self.resources.lexicons;
        for w in words[..verb].iter().rev() {
            if let Some(p) = lex.pronouns.get(&w.lower) {
                return p.person == Person::Third && p.number == Number::Singular;
            }
            if matches!(w.pos, CoarsePos::Noun) || w.pos.is_proper_noun() {
                return !(w.tag == "NNS");
            }
        }
        false
    }

    fn attach(&self, words: &[Word]) -> Result<Vec<(usize, &'static str)>, AnalyzeError> {
        let clause_verb = |i: usize| {
            let w = &words[i];
            if w.role != Role::Verb || w.infinitival {
                return false;
            }
            let has_aux = previous_content(words, i).is_some_and(|p| words[p].is_aux());
            has_aux || !matches!(w.tag.as_str(), "VBG" | "VBN")
        };
        let root = match (0..words.len()).find(|&i| clause_verb(i)) {
            Some(r) => r,
            None => {
                let first_aux = (0..words.len())
                    .find(|&i| words[i].is_aux())
                    .ok_or_else(|| AnalyzeError::Unsupported("no verb found".into()))?;
                let mut last = first_aux;
                let mut j = first_aux + 1;
                while j < words.len()
                    && (words[j].is_aux() || words[j].role == Role::Neg || words[j].is_adverb())
                {
                    if words[j].is_aux() {
                        last = j;
                    }
                    j += 1;
                }
                last
            }
        };
        let first_word = (0..words.len()).find(|&i| !words[i].is_punct());
        if first_word.is_some_and(|f| words[f].is_aux()) {
            return Err(AnalyzeError::Unsupported(
                "sentence-initial auxiliary (question or inversion)".into(),
            ));
        }
        let chain_start = {
            let mut k = root;
            while k > 0 {
                let w = &words[k - 1];
                if w.is_aux() || w.role == Role::Neg || w.is_adverb() {
                    k -= 1;
                } else {
                    break;
                }
            }
            k
        };
        if first_word == Some(chain_start) && chain_start <= root {
            // nothing precedes the verb group: inversion or imperative
            return Err(AnalyzeError::Unsupported(
                "no subject before the verb (question or imperative)".into(),
            ));
        }

        let root_index = root + 1;
        let mut heads = vec![(root_index, "dep"); words.len()];
        heads[root] = (0, "root");
        for k in chain_start..root {
            if words[k].is_aux() {
                heads[k] = (root_index, "aux");
            }
        }
        for (i, w) in words.iter().enumerate() {
            if w.role != Role::Neg {
                continue;
            }
            let mut host = root_index;
            let mut k = i;
            while k > 0 {
                k -= 1;
                if words[k].is_aux() {
                    host = k + 1;
                    break;
                }
                if !words[k].is_adverb() {
                    break;
                }
            }
            heads[i] = (host, "neg");
        }
        Ok(heads)
    }
}

fn previous_content(words: &[Word], i: usize) -> Option<usize> {
    (0..i)
        .rev()
        .find(|&k| !words[k].is_adverb() && words[k].role != Role::Neg)
}

fn next_content(words: &[Word], i: usize) -> Option<usize> {
    (i + 1..words.len()).find(|&k| !words[k].is_adverb() && words[k].role != Role::Neg)
}

fn looks_verbal(lower: &str) -> bool {
    let alphabetic = lower.chars().all(|c| c.is_alphabetic());
    alphabetic
        && ((lower.ends_with("ed") && lower.len() >= 5) || (lower.ends_with("ing") && lower.len() >= 6))
}

fn is_punctuation(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_punctuation() || LEADING_PUNCT.contains(&c) || TRAILING_PUNCT.contains(&c))
        && !s.starts_with('\'')
}

fn punct_tag(s: &str) -> &'static str {
    match s.chars().next() {
        Some('.' | '!' | '?' | '\u{2026}') => ".",
        Some(',') => ",",
        Some(';' | ':') => ":",
        Some('(' | '[' | '{') => "-LRB-",
        Some(')' | ']' | '}') => "-RRB-",
        Some('"' | '\u{201c}') => "``",
        Some('\u{201d}') => "''",
        _ => "SYM",
    }
}

fn tokenize(resources: &Resources, text: &str) -> Vec<Piece> {
    let chunks: Vec<&str> = text.split_whitespace().collect();
    let mut pieces = Vec::new();
    for (ci, chunk) in chunks.iter().enumerate() {
        let mut split = split_chunk(resources, chunk);
        let followed_by_space = ci + 1 < chunks.len();
        let n = split.len();
        for (k, piece) in split.iter_mut().enumerate() {
            piece.space_after = k + 1 == n && followed_by_space;
        }
        pieces.extend(split);
    }
    pieces
}

fn split_chunk(resources: &Resources, chunk: &str) -> Vec<Piece> {
    let piece = |s: &str| Piece {
        surface: s.to_string(),
        space_after: false,
        lemma_hint: None,
        host: None,
    };
    let mut leading = Vec::new();
    let mut core = chunk;
    while let Some(c) = core.chars().next() {
        if LEADING_PUNCT.contains(&c) && core.len() > c.len_utf8() {
            leading.push(piece(&core[..c.len_utf8()]));
            core = &core[c.len_utf8()..];
        } else {
            break;
        }
    }
    // trailing punctuation, grouped into runs of the same character
    let mut trailing: Vec<String> = Vec::new();
    while let Some(c) = core.chars().last() {
        if !TRAILING_PUNCT.contains(&c) {
            break;
        }
        // a lone punctuation chunk is its own core
        if core.len() == c.len_utf8() && core.len() == chunk.len() && trailing.is_empty() && leading.is_empty() {
            break;
        }
        let stem = &core[..core.len() - c.len_utf8()];
        if c == '.' && trailing.is_empty() && is_abbreviation(stem) {
            break;
        }
        if stem.is_empty() {
            break;
        }
        match trailing.first_mut() {
            Some(run) if run.starts_with(c) => run.insert(0, c),
            _ => trailing.insert(0, c.to_string()),
        }
        core = stem;
    }

    let mut out = leading;
    out.extend(split_clitics(resources, core));
    out.extend(trailing.iter().map(|t| piece(t)));
    out
}

fn is_abbreviation(stem: &str) -> bool {
    let lower = stem.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
        || (stem.contains('.') && stem.chars().all(|c| c.is_alphabetic() || c == '.'))
}

fn split_clitics(resources: &Resources, core: &str) -> Vec<Piece> {
    let lower = normalize_apostrophes(&core.to_lowercase());
    let piece = |s: &str, lemma: Option<&str>, host: Option<&str>| Piece {
        surface: s.to_string(),
        space_after: false,
        lemma_hint: lemma.map(str::to_string),
        host: host.map(str::to_string),
    };
    if let Some(parts) = resources.lexicons.contraction_splits.get(&lower) {
        let mut out = Vec::new();
        let mut rest = core;
        for part in parts {
            let n = part.surface.chars().count();
            let byte_len = rest.char_indices().nth(n).map_or(rest.len(), |(b, _)| b);
            out.push(piece(&rest[..byte_len], Some(&part.lemma), None));
            rest = &rest[byte_len..];
        }
        return out;
    }
    let char_count = lower.chars().count();
    if lower.ends_with("n't") && char_count > 3 {
        let cut = byte_offset_from_end(core, 3);
        return vec![
            piece(&core[..cut], None, None),
            piece(&core[cut..], Some("not"), None),
        ];
    }
    for clitic in CLITICS {
        if lower.ends_with(clitic) && char_count > clitic.chars().count() {
            let cut = byte_offset_from_end(core, clitic.chars().count());
            let host = lower[..lower.len() - clitic.len()].to_string();
            return vec![
                piece(&core[..cut], None, None),
                piece(&core[cut..], None, Some(&host)),
            ];
        }
    }
    vec![piece(core, None, None)]
}

fn byte_offset_from_end(s: &str, chars_from_end: usize) -> usize {
    s.char_indices()
        .rev()
        .nth(chars_from_end - 1)
        .map_or(0, |(b, _)| b)
}
