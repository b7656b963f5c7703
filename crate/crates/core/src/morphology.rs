//! English verb morphology: lemmatization, inflection, do-support and
//! negative contractions.
//!
//! Irregular verbs and the regular-verb vocabulary are data (see
//! `data/irregular_verbs.tsv` and `data/regular_verbs.tsv`). Verbs missing
//! from both lists fall back to the regular spelling rules.

use std::collections::{HashMap, HashSet};

use crate::lexicon::{data_lines, LexiconError};
use crate::linguistic::{normalize_apostrophes, MorphTarget, Number, Person, Tense, VerbForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrregularForms {
    pub past: String,
    pub past_participle: String,
    pub third_singular: String,
    pub gerund: String,
}

/// The inflectional slot a listed verb form occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormSlot {
    Lemma,
    Past,
    PastParticiple,
    ThirdSingular,
    Gerund,
}

impl FormSlot {
    pub const ALL: [FormSlot; 5] = [
        FormSlot::Lemma,
        FormSlot::Past,
        FormSlot::PastParticiple,
        FormSlot::ThirdSingular,
        FormSlot::Gerund,
    ];

    pub fn target(self) -> MorphTarget {
        match self {
            FormSlot::Lemma => MorphTarget::bare(),
            FormSlot::Past => MorphTarget::past(),
            FormSlot::PastParticiple => MorphTarget::with_form(VerbForm::PastParticiple),
            FormSlot::ThirdSingular => MorphTarget::third_singular(),
            FormSlot::Gerund => MorphTarget::with_form(VerbForm::Gerund),
        }
    }
}

const BE_FORMS: [&str; 8] = ["am", "is", "are", "was", "were", "been", "being", "be"];

const MODALS: [&str; 10] = [
    "will", "would", "can", "could", "shall", "should", "may", "might", "must", "ought",
];

#[derive(Debug, Clone, Default)]
pub struct VerbLexicon {
    irregulars: HashMap<String, IrregularForms>,
    /// irregular inflected form -> lemma
    reverse: HashMap<String, String>,
    regulars: HashSet<String>,
    /// polysyllabic verbs whose final consonant doubles (prefer -> preferred)
    doubling: HashSet<String>,
}

impl VerbLexicon {
    /// Parses the irregular table (`lemma past participle 3sg gerund`) and
    /// the regular vocabulary (`lemma [double]`).
    pub fn from_tsv(irregular: &str, regular: &str) -> Result<Self, LexiconError> {
        let mut lexicon = VerbLexicon::default();
        for (line_no, fields) in data_lines(irregular) {
            if fields.len() != 5 {
                return Err(LexiconError::malformed(
                    "irregular_verbs.tsv",
                    line_no,
                    format!("expected 5 columns, found {}", fields.len()),
                ));
            }
            let lemma = fields[0].to_lowercase();
            let forms = IrregularForms {
                past: fields[1].to_lowercase(),
                past_participle: fields[2].to_lowercase(),
                third_singular: fields[3].to_lowercase(),
                gerund: fields[4].to_lowercase(),
            };
            for form in [
                &forms.past,
                &forms.past_participle,
                &forms.third_singular,
                &forms.gerund,
            ] {
                if let Some(other) = lexicon.reverse.get(form.as_str()) {
                    if other != &lemma {
                        return Err(LexiconError::malformed(
                            "irregular_verbs.tsv",
                            line_no,
                            format!("form {form:?} already belongs to {other:?}"),
                        ));
                    }
                }
                lexicon.reverse.insert(form.clone(), lemma.clone());
            }
            lexicon.irregulars.insert(lemma, forms);
        }
        for (line_no, fields) in data_lines(regular) {
            let lemma = fields[0].to_lowercase();
            match fields.get(1).copied() {
                None | Some("") => {}
                Some("double") => {
                    lexicon.doubling.insert(lemma.clone());
                }
                Some(flag) => {
                    return Err(LexiconError::malformed(
                        "regular_verbs.tsv",
                        line_no,
                        format!("unknown flag {flag:?}"),
                    ))
                }
            }
            lexicon.regulars.insert(lemma);
        }
        Ok(lexicon)
    }

    pub fn irregulars(&self) -> impl Iterator<Item = (&str, &IrregularForms)> {
        self.irregulars.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn irregular(&self, lemma: &str) -> Option<&IrregularForms> {
        self.irregulars.get(lemma)
    }

    pub fn regulars(&self) -> impl Iterator<Item = &str> {
        self.regulars.iter().map(String::as_str)
    }

    /// True for lemmas of either list and for "be".
    pub fn is_known_lemma(&self, word: &str) -> bool {
        word == "be" || self.irregulars.contains_key(word) || self.regulars.contains(word)
    }

    /// True if `word` is any listed or regularly derivable form of a known verb.
    pub fn is_known_form(&self, word: &str) -> bool {
        let lower = word.to_lowercase();
        if BE_FORMS.contains(&lower.as_str()) || self.is_known_lemma(&lower) {
            return true;
        }
        if self.reverse.contains_key(&lower) {
            return true;
        }
        let lemma = self.lemmatize_verb(&lower);
        self.regulars.contains(&lemma)
            && FormSlot::ALL
                .iter()
                .any(|slot| self.inflect_verb(&lemma, slot.target()) == lower)
    }

    /// Whether `word` can be a past participle of a lexicon verb.
    pub fn is_past_participle(&self, word: &str) -> bool {
        let lower = word.to_lowercase();
        if lower == "been" {
            return true;
        }
        if let Some(lemma) = self.reverse.get(&lower) {
            return self.irregulars[lemma].past_participle == lower;
        }
        let lemma = self.lemmatize_verb(&lower);
        self.regulars.contains(&lemma)
            && self.inflect_verb(&lemma, FormSlot::PastParticiple.target()) == lower
    }

    /// Irregular past participles only (the "'s" = has test keys on these).
    pub fn is_irregular_past_participle(&self, word: &str) -> bool {
        let lower = word.to_lowercase();
        lower == "been"
            || self
                .reverse
                .get(&lower)
                .is_some_and(|lemma| self.irregulars[lemma].past_participle == lower)
    }

    /// Slot of a listed irregular form (or of "be" forms) if unambiguous
    /// enough to tag; regular forms are classified by suffix.
    pub fn slots_of(&self, word: &str) -> Vec<FormSlot> {
        let lower = word.to_lowercase();
        let lemma = self.lemmatize_verb(&lower);
        FormSlot::ALL
            .into_iter()
            .filter(|slot| self.inflect_verb(&lemma, slot.target()) == lower)
            .collect()
    }

    /// Lemma of a verb form; unknown forms come back unchanged apart from
    /// regular suffix stripping.
    pub fn lemmatize_verb(&self, form: &str) -> String {
        let lower = normalize_apostrophes(&form.to_lowercase());
        if BE_FORMS.contains(&lower.as_str()) {
            return "be".to_string();
        }
        if MODALS.contains(&lower.as_str()) || self.is_known_lemma(&lower) {
            return lower;
        }
        if let Some(lemma) = self.reverse.get(&lower) {
            return lemma.clone();
        }
        let candidates = suffix_candidates(&lower);
        if let Some(known) = candidates.iter().find(|c| self.is_known_lemma(c)) {
            return known.clone();
        }
        fallback_lemma(&lower).unwrap_or(lower)
    }

    pub fn inflect_verb(&self, lemma: &str, target: MorphTarget) -> String {
        let lemma = lemma.to_lowercase();
        if lemma == "be" {
            return inflect_be(target).to_string();
        }
        if MODALS.contains(&lemma.as_str()) {
            return lemma;
        }
        let irregular = self.irregulars.get(&lemma);
        match target.verb_form {
            VerbForm::BareInfinitive => lemma,
            VerbForm::PastParticiple => irregular
                .map(|f| f.past_participle.clone())
                .unwrap_or_else(|| self.regular_past(&lemma)),
            VerbForm::Gerund => irregular
                .map(|f| f.gerund.clone())
                .unwrap_or_else(|| self.regular_gerund(&lemma)),
            VerbForm::Finite => match target.tense {
                Tense::Past => irregular
                    .map(|f| f.past.clone())
                    .unwrap_or_else(|| self.regular_past(&lemma)),
                Tense::Present if target.is_third_singular_present() => irregular
                    .map(|f| f.third_singular.clone())
                    .unwrap_or_else(|| regular_third_singular(&lemma)),
                Tense::Present => lemma,
            },
        }
    }

    fn doubles(&self, lemma: &str) -> bool {
        self.doubling.contains(lemma) || (syllable_groups(lemma) == 1 && ends_cvc(lemma))
    }

    fn regular_past(&self, lemma: &str) -> String {
        if lemma.ends_with('e') {
            format!("{lemma}d")
        } else if ends_consonant_y(lemma) {
            format!("{}ied", &lemma[..lemma.len() - 1])
        } else if self.doubles(lemma) {
            format!("{lemma}{}ed", last_char(lemma))
        } else {
            format!("{lemma}ed")
        }
    }

    fn regular_gerund(&self, lemma: &str) -> String {
        if let Some(stem) = lemma.strip_suffix("ie") {
            format!("{stem}ying")
        } else if lemma.len() > 2
            && lemma.ends_with('e')
            && !lemma.ends_with("ee")
            && !lemma.ends_with("ye")
            && !lemma.ends_with("oe")
        {
            format!("{}ing", &lemma[..lemma.len() - 1])
        } else if self.doubles(lemma) {
            format!("{lemma}{}ing", last_char(lemma))
        } else {
            format!("{lemma}ing")
        }
    }
}

fn inflect_be(target: MorphTarget) -> &'static str {
    match target.verb_form {
        VerbForm::BareInfinitive => "be",
        VerbForm::PastParticiple => "been",
        VerbForm::Gerund => "being",
        VerbForm::Finite => match (target.tense, target.person, target.number) {
            (Tense::Past, Person::First | Person::Third, Number::Singular) => "was",
            (Tense::Past, _, _) => "were",
            (Tense::Present, Person::First, Number::Singular) => "am",
            (Tense::Present, Person::Third, Number::Singular) => "is",
            (Tense::Present, _, _) => "are",
        },
    }
}

fn regular_third_singular(lemma: &str) -> String {
    if ends_consonant_y(lemma) {
        format!("{}ies", &lemma[..lemma.len() - 1])
    } else if ["s", "x", "z", "ch", "sh", "o"]
        .iter()
        .any(|suffix| lemma.ends_with(suffix))
    {
        format!("{lemma}es")
    } else {
        format!("{lemma}s")
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn last_char(s: &str) -> char {
    s.chars().last().unwrap_or_default()
}

fn ends_consonant_y(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    chars.len() >= 2 && chars[chars.len() - 1] == 'y' && !is_vowel(chars[chars.len() - 2])
}

fn syllable_groups(s: &str) -> usize {
    let mut groups = 0;
    let mut in_vowel = false;
    for c in s.chars() {
        let v = is_vowel(c);
        if v && !in_vowel {
            groups += 1;
        }
        in_vowel = v;
    }
    groups
}

/// consonant-vowel-consonant ending whose final consonant may double
fn ends_cvc(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    let n = chars.len();
    n >= 3
        && !is_vowel(chars[n - 1])
        && !matches!(chars[n - 1], 'w' | 'x' | 'y')
        && is_vowel(chars[n - 2])
        && !is_vowel(chars[n - 3])
}

fn has_vowel(s: &str) -> bool {
    s.chars().any(|c| is_vowel(c) || c == 'y')
}

/// Every plausible lemma for a suffixed form, most likely first.
fn suffix_candidates(form: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut push = |s: String| {
        if s.len() >= 2 && has_vowel(&s) && !out.contains(&s) {
            out.push(s);
        }
    };
    if let Some(stem) = form.strip_suffix("ies") {
        push(format!("{stem}y"));
    }
    if let Some(stem) = form.strip_suffix("es") {
        push(stem.to_string());
    }
    if let Some(stem) = form.strip_suffix('s') {
        if !stem.ends_with('s') {
            push(stem.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix("ied") {
        push(format!("{stem}y"));
    }
    for suffix in ["ed", "ing"] {
        if let Some(stem) = form.strip_suffix(suffix) {
            if suffix == "ing" {
                if let Some(base) = stem.strip_suffix('y') {
                    push(format!("{base}ie"));
                }
            }
            push(stem.to_string());
            push(format!("{stem}e"));
            if let Some(undoubled) = undouble(stem) {
                push(undoubled);
            }
        }
    }
    out
}

fn undouble(stem: &str) -> Option<String> {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    (n >= 3 && chars[n - 1] == chars[n - 2] && !is_vowel(chars[n - 1]))
        .then(|| chars[..n - 1].iter().collect())
}

fn needs_e(stem: &str) -> bool {
    let chars: Vec<char> = stem.chars().collect();
    let n = chars.len();
    if n < 2 {
        return false;
    }
    let last = chars[n - 1];
    let prev = chars[n - 2];
    matches!(last, 'v' | 'u' | 'c')
        || (last == 'z' && prev != 'z')
        || (last == 'l' && !is_vowel(prev) && prev != 'l')
}

/// Rule-only lemma for forms outside the vocabulary.
fn fallback_lemma(form: &str) -> Option<String> {
    if let Some(stem) = form.strip_suffix("ies") {
        if stem.len() >= 2 {
            return Some(format!("{stem}y"));
        }
    }
    if let Some(stem) = form.strip_suffix("ied") {
        if stem.len() >= 2 {
            return Some(format!("{stem}y"));
        }
    }
    if form.ends_with("eed") {
        return None;
    }
    for suffix in ["ed", "ing"] {
        if let Some(stem) = form.strip_suffix(suffix) {
            if stem.len() < 3 || !has_vowel(stem) {
                return None;
            }
            if let Some(undoubled) = undouble(stem) {
                if !matches!(last_char(stem), 'l' | 's' | 'f' | 'z') {
                    return Some(undoubled);
                }
            }
            if needs_e(stem) {
                return Some(format!("{stem}e"));
            }
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix("es") {
        if ["s", "x", "z", "ch", "sh", "o"].iter().any(|s| stem.ends_with(s)) && stem.len() >= 2 {
            return Some(stem.to_string());
        }
    }
    if let Some(stem) = form.strip_suffix('s') {
        if !stem.ends_with('s') && !stem.ends_with('u') && !stem.ends_with('i') && stem.len() >= 2 {
            return Some(stem.to_string());
        }
    }
    None
}

/// Finite form of auxiliary "do" for the given features.
pub fn conjugate_do(target: MorphTarget) -> &'static str {
    match target.tense {
        _ if target.verb_form != VerbForm::Finite => "do",
        Tense::Past => "did",
        Tense::Present if target.is_third_singular_present() => "does",
        Tense::Present => "do",
    }
}

/// Negative contractions of auxiliaries ("will" <-> "won't").
#[derive(Debug, Clone, Default)]
pub struct ContractionTable {
    forward: HashMap<String, String>,
    reverse: HashMap<String, String>,
}

impl ContractionTable {
    pub fn from_tsv(text: &str) -> Result<Self, LexiconError> {
        let mut table = ContractionTable::default();
        for (line_no, fields) in data_lines(text) {
            if fields.len() != 2 || !fields[1].ends_with("n't") {
                return Err(LexiconError::malformed(
                    "contractions.tsv",
                    line_no,
                    "expected `auxiliary<TAB>contraction ending in n't`",
                ));
            }
            let aux = fields[0].to_lowercase();
            let contracted = fields[1].to_lowercase();
            if table.reverse.contains_key(&contracted) || table.forward.contains_key(&aux) {
                return Err(LexiconError::malformed(
                    "contractions.tsv",
                    line_no,
                    "duplicate entry",
                ));
            }
            table.forward.insert(aux.clone(), contracted.clone());
            table.reverse.insert(contracted, aux);
        }
        Ok(table)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.forward.iter().map(|(a, c)| (a.as_str(), c.as_str()))
    }

    /// "will" -> "won't"; `None` when the auxiliary has no contraction
    /// (e.g. "am"). The first letter's case follows the input.
    pub fn contract_negation(&self, aux_surface: &str) -> Option<String> {
        let lower = aux_surface.to_lowercase();
        self.forward
            .get(&lower)
            .map(|c| match_case(aux_surface, c))
    }

    /// "won't" -> "will not".
    pub fn expand(&self, contracted: &str) -> Option<String> {
        let lower = normalize_apostrophes(&contracted.to_lowercase());
        self.reverse
            .get(&lower)
            .map(|aux| match_case(contracted, &format!("{aux} not")))
    }

    /// Full auxiliary for the host part of a split contraction:
    /// ("wo", "n't") -> "will", ("is", "n't") -> "is".
    pub fn host_full_form(&self, host: &str) -> Option<String> {
        let joined = format!("{}n't", host.to_lowercase());
        self.reverse
            .get(&joined)
            .map(|aux| match_case(host, aux))
    }

    /// Host surface for a contracted negative: "won't" -> "wo".
    pub fn contraction_host(&self, aux_surface: &str) -> Option<String> {
        self.contract_negation(aux_surface)
            .and_then(|c| c.strip_suffix("n't").map(str::to_string))
    }
}

/// Copies the capitalization of `model`'s first letter onto `word`.
pub fn match_case(model: &str, word: &str) -> String {
    let upper = model.chars().next().is_some_and(char::is_uppercase);
    if upper {
        capitalize(word)
    } else {
        word.to_string()
    }
}

pub fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Resources;

    fn lex() -> &'static VerbLexicon {
        &Resources::bundled().verbs
    }

    #[test]
    fn lemmatize_examples() {
        let l = lex();
        assert_eq!(l.lemmatize_verb("knew"), "know");
        assert_eq!(l.lemmatize_verb("be"), "be");
        assert_eq!(l.lemmatize_verb("enjoyed"), "enjoy");
        assert_eq!(l.lemmatize_verb("tries"), "try");
        assert_eq!(l.lemmatize_verb("stopped"), "stop");
        assert_eq!(l.lemmatize_verb("hoping"), "hope");
        assert_eq!(l.lemmatize_verb("controlled"), "control");
        assert_eq!(l.lemmatize_verb("called"), "call");
        assert_eq!(l.lemmatize_verb("watches"), "watch");
        assert_eq!(l.lemmatize_verb("dying"), "die");
        assert_eq!(l.lemmatize_verb("was"), "be");
        assert_eq!(l.lemmatize_verb("Went"), "go");
    }

    #[test]
    fn lemmatize_unknown_forms() {
        let l = lex();
        // outside the vocabulary: rule-based stripping
        assert_eq!(l.lemmatize_verb("blorked"), "blork");
        assert_eq!(l.lemmatize_verb("zapped"), "zap");
        assert_eq!(l.lemmatize_verb("grooving"), "groove");
        assert_eq!(l.lemmatize_verb("fizzles"), "fizzle");
        // nothing to strip
        assert_eq!(l.lemmatize_verb("xyz"), "xyz");
        assert_eq!(l.lemmatize_verb("freed"), "freed");
    }

    #[test]
    fn inflect_examples() {
        let l = lex();
        assert_eq!(l.inflect_verb("know", MorphTarget::past()), "knew");
        assert_eq!(l.inflect_verb("enjoy", MorphTarget::bare()), "enjoy");
        assert_eq!(l.inflect_verb("try", MorphTarget::third_singular()), "tries");
        assert_eq!(l.inflect_verb("try", MorphTarget::past()), "tried");
        assert_eq!(l.inflect_verb("stop", MorphTarget::past()), "stopped");
        assert_eq!(l.inflect_verb("prefer", MorphTarget::past()), "preferred");
        assert_eq!(l.inflect_verb("visit", MorphTarget::past()), "visited");
        assert_eq!(l.inflect_verb("watch", MorphTarget::third_singular()), "watches");
        assert_eq!(l.inflect_verb("have", MorphTarget::third_singular()), "has");
        assert_eq!(l.inflect_verb("hope", MorphTarget::with_form(VerbForm::Gerund)), "hoping");
        assert_eq!(l.inflect_verb("agree", MorphTarget::with_form(VerbForm::Gerund)), "agreeing");
        assert_eq!(l.inflect_verb("run", MorphTarget::present_plain()), "run");
        assert_eq!(l.inflect_verb("will", MorphTarget::past()), "will");
    }

    #[test]
    fn inflect_be_paradigm() {
        let l = lex();
        let t = |tense, person, number| MorphTarget::finite(tense, person, number);
        assert_eq!(l.inflect_verb("be", t(Tense::Present, Person::First, Number::Singular)), "am");
        assert_eq!(l.inflect_verb("be", t(Tense::Present, Person::Third, Number::Singular)), "is");
        assert_eq!(l.inflect_verb("be", t(Tense::Present, Person::Second, Number::Plural)), "are");
        assert_eq!(l.inflect_verb("be", t(Tense::Past, Person::First, Number::Singular)), "was");
        assert_eq!(l.inflect_verb("be", t(Tense::Past, Person::Third, Number::Plural)), "were");
        assert_eq!(l.inflect_verb("be", MorphTarget::with_form(VerbForm::PastParticiple)), "been");
    }

    #[test]
    fn irregular_lexicon_round_trips() {
        let l = lex();
        assert!(l.irregulars().count() >= 150);
        for (lemma, forms) in l.irregulars() {
            let listed = [
                (lemma, FormSlot::Lemma),
                (forms.past.as_str(), FormSlot::Past),
                (forms.past_participle.as_str(), FormSlot::PastParticiple),
                (forms.third_singular.as_str(), FormSlot::ThirdSingular),
                (forms.gerund.as_str(), FormSlot::Gerund),
            ];
            for (form, slot) in listed {
                assert_eq!(l.lemmatize_verb(form), lemma, "lemmatize {form}");
                assert_eq!(l.inflect_verb(&l.lemmatize_verb(form), slot.target()), form);
            }
        }
    }

    #[test]
    fn regular_vocabulary_round_trips() {
        let l = lex();
        for lemma in l.regulars() {
            for slot in FormSlot::ALL {
                let form = l.inflect_verb(lemma, slot.target());
                assert_eq!(l.lemmatize_verb(&form), lemma, "{lemma} -> {form}");
            }
        }
    }

    #[test]
    fn conjugate_do_paradigm() {
        assert_eq!(conjugate_do(MorphTarget::past()), "did");
        assert_eq!(conjugate_do(MorphTarget::third_singular()), "does");
        assert_eq!(conjugate_do(MorphTarget::present_plain()), "do");
        for tense in [Tense::Past, Tense::Present] {
            for person in [Person::First, Person::Second, Person::Third] {
                for number in [Number::Singular, Number::Plural] {
                    let form = conjugate_do(MorphTarget::finite(tense, person, number));
                    assert!(["do", "does", "did"].contains(&form));
                }
            }
        }
    }

    #[test]
    fn contraction_examples() {
        let c = &Resources::bundled().contractions;
        assert_eq!(c.contract_negation("will").as_deref(), Some("won't"));
        assert_eq!(c.contract_negation("do").as_deref(), Some("don't"));
        assert_eq!(c.contract_negation("am"), None);
        assert_eq!(c.contract_negation("Is").as_deref(), Some("Isn't"));
        assert_eq!(c.contraction_host("will").as_deref(), Some("wo"));
        assert_eq!(c.host_full_form("wo").as_deref(), Some("will"));
        assert_eq!(c.host_full_form("Ca").as_deref(), Some("Can"));
        assert_eq!(c.expand("won’t").as_deref(), Some("will not"));
    }

    #[test]
    fn contraction_table_is_bijective() {
        let c = &Resources::bundled().contractions;
        for (aux, contracted) in c.entries() {
            assert_eq!(c.expand(contracted).unwrap(), format!("{aux} not"));
            assert_eq!(c.contract_negation(aux).unwrap(), contracted);
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(VerbLexicon::from_tsv("go\twent\n", "").is_err());
        assert!(VerbLexicon::from_tsv("", "walk\tsometimes\n").is_err());
        assert!(ContractionTable::from_tsv("will\twill not\n").is_err());
        assert!(ContractionTable::from_tsv("will\twon't\nwill\twon't\n").is_err());
    }
}
