//! Dependency-annotated sentence model shared by the parsers, the negator
//! and CoNLL-U serialization.

use std::fmt;

use thiserror::Error;

/// Coarse part-of-speech tag (UPOS subset the negator cares about).
///
/// Tags outside the subset are kept verbatim in [`CoarsePos::Other`] so
/// that CoNLL-U input survives a parse/emit round trip.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoarsePos {
    Verb,
    Aux,
    Part,
    Adv,
    Noun,
    Pron,
    Adj,
    Det,
    Adp,
    Num,
    Punct,
    Other(String),
}

impl CoarsePos {
    pub fn parse(tag: &str) -> Self {
        match tag {
            "VERB" => CoarsePos::Verb,
            "AUX" => CoarsePos::Aux,
            "PART" => CoarsePos::Part,
            "ADV" => CoarsePos::Adv,
            "NOUN" => CoarsePos::Noun,
            "PRON" => CoarsePos::Pron,
            "ADJ" => CoarsePos::Adj,
            "DET" => CoarsePos::Det,
            "ADP" => CoarsePos::Adp,
            "NUM" => CoarsePos::Num,
            "PUNCT" => CoarsePos::Punct,
            other => CoarsePos::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            CoarsePos::Verb => "VERB",
            CoarsePos::Aux => "AUX",
            CoarsePos::Part => "PART",
            CoarsePos::Adv => "ADV",
            CoarsePos::Noun => "NOUN",
            CoarsePos::Pron => "PRON",
            CoarsePos::Adj => "ADJ",
            CoarsePos::Det => "DET",
            CoarsePos::Adp => "ADP",
            CoarsePos::Num => "NUM",
            CoarsePos::Punct => "PUNCT",
            CoarsePos::Other(tag) => tag,
        }
    }

    pub fn is_proper_noun(&self) -> bool {
        matches!(self, CoarsePos::Other(tag) if tag == "PROPN")
    }
}

impl fmt::Display for CoarsePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A syntactic word with its dependency attachment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub coarse_pos: CoarsePos,
    /// Penn Treebank tag (VBD, VBZ, MD, ...); empty when unknown.
    pub fine_tag: String,
    /// Index of the governing token, 0 for the root.
    pub head: usize,
    pub deprel: String,
    pub space_after: bool,
}

impl Token {
    pub fn new(index: usize, surface: impl Into<String>) -> Self {
        let surface = surface.into();
        Token {
            index,
            lemma: surface.to_lowercase(),
            surface,
            coarse_pos: CoarsePos::Other("X".to_string()),
            fine_tag: String::new(),
            head: 0,
            deprel: String::new(),
            space_after: true,
        }
    }

    /// Lemma if one is recorded, otherwise the lowercased surface.
    pub fn lemma_or_surface(&self) -> String {
        if self.lemma.is_empty() {
            self.surface.to_lowercase()
        } else {
            self.lemma.to_lowercase()
        }
    }

    /// Negation cue test: the "neg" relation, or an `advmod` whose lemma is
    /// one of the verbal negation words (UD schemes have no "neg" label).
    pub fn is_negation_cue(&self) -> bool {
        if self.deprel == "neg" {
            return true;
        }
        if self.deprel == "advmod" || self.deprel == "advmod:neg" {
            let lemma = normalize_apostrophes(&self.lemma_or_surface());
            let surface = normalize_apostrophes(&self.surface.to_lowercase());
            return [lemma.as_str(), surface.as_str()]
                .iter()
                .any(|w| matches!(*w, "not" | "n't" | "never"));
        }
        false
    }

    pub fn is_auxiliary_relation(&self) -> bool {
        matches!(self.deprel.as_str(), "aux" | "aux:pass" | "auxpass")
    }

    pub fn is_copula_relation(&self) -> bool {
        self.deprel == "cop"
    }
}

/// Replaces typographic apostrophes with ASCII ones.
pub fn normalize_apostrophes(s: &str) -> String {
    s.replace(['\u{2019}', '\u{2018}'], "'")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("sentence has no tokens")]
    Empty,
    #[error("token at position {position} has index {found}, expected {expected}")]
    IndexGap {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("token {index} has an empty surface")]
    EmptySurface { index: usize },
    #[error("token {index} points to head {head}, outside 0..={len}")]
    HeadOutOfRange { index: usize, head: usize, len: usize },
    #[error("token {index} is its own head")]
    SelfLoop { index: usize },
    #[error("no root token (head = 0)")]
    NoRoot,
    #[error("multiple root tokens: {0:?}")]
    MultipleRoots(Vec<usize>),
    #[error("token {index} does not reach the root")]
    Cycle { index: usize },
    #[error("index {index} is outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A validated dependency tree over the words of one sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSentence {
    tokens: Vec<Token>,
    text: String,
}

impl ParsedSentence {
    /// Validates the tree invariants: contiguous 1-based indices, non-empty
    /// surfaces, in-range heads, a single root and no cycles.
    pub fn new(tokens: Vec<Token>, text: impl Into<String>) -> Result<Self, TreeError> {
        validate(&tokens)?;
        Ok(ParsedSentence {
            tokens,
            text: text.into(),
        })
    }

    /// Builds a sentence whose text is the detokenized token sequence.
    pub fn from_tokens(tokens: Vec<Token>) -> Result<Self, TreeError> {
        let text = detokenize(&tokens);
        Self::new(tokens, text)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn root(&self) -> &Token {
        // validated at construction
        self.tokens
            .iter()
            .find(|t| t.head == 0)
            .expect("validated sentence has a root")
    }

    /// Dependents of `index` in surface order.
    pub fn children_of(&self, index: usize) -> Result<Vec<&Token>, TreeError> {
        children_of(&self.tokens, index)
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.tokens
    }
}

/// Dependents of `index` in surface order.
pub fn children_of(tokens: &[Token], index: usize) -> Result<Vec<&Token>, TreeError> {
    if index == 0 || index > tokens.len() {
        return Err(TreeError::IndexOutOfRange {
            index,
            len: tokens.len(),
        });
    }
    Ok(tokens.iter().filter(|t| t.head == index).collect())
}

/// The unique token with head 0.
pub fn root_of(tokens: &[Token]) -> Result<&Token, TreeError> {
    let roots: Vec<&Token> = tokens.iter().filter(|t| t.head == 0).collect();
    match roots.as_slice() {
        [] => Err(TreeError::NoRoot),
        [root] => Ok(root),
        many => Err(TreeError::MultipleRoots(
            many.iter().map(|t| t.index).collect(),
        )),
    }
}

fn validate(tokens: &[Token]) -> Result<(), TreeError> {
    if tokens.is_empty() {
        return Err(TreeError::Empty);
    }
    let len = tokens.len();
    if let Some((pos, token)) = tokens
        .iter()
        .enumerate()
        .find(|(pos, t)| t.index != pos + 1)
    {
        return Err(TreeError::IndexGap {
            position: pos + 1,
            expected: pos + 1,
            found: token.index,
        });
    }
    for token in tokens {
        if token.surface.is_empty() {
            return Err(TreeError::EmptySurface { index: token.index });
        }
        if token.head > len {
            return Err(TreeError::HeadOutOfRange {
                index: token.index,
                head: token.head,
                len,
            });
        }
        if token.head == token.index {
            return Err(TreeError::SelfLoop { index: token.index });
        }
    }
    root_of(tokens)?;
    // a walk longer than n steps must revisit a node
    for token in tokens {
        let mut current = token.head;
        let mut steps = 0;
        while current != 0 {
            steps += 1;
            if steps > len {
                return Err(TreeError::Cycle { index: token.index });
            }
            current = tokens[current - 1].head;
        }
    }
    Ok(())
}

/// Joins surfaces, honouring each token's `space_after` flag. The last
/// token never contributes a trailing space.
pub fn detokenize(tokens: &[Token]) -> String {
    let mut out = String::new();
    for (i, token) in tokens.iter().enumerate() {
        out.push_str(&token.surface);
        if token.space_after && i + 1 < tokens.len() {
            out.push(' ');
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tense {
    Past,
    Present,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Person {
    First,
    Second,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerbForm {
    Finite,
    BareInfinitive,
    PastParticiple,
    Gerund,
}

/// Inflectional features a verb form should be realized with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MorphTarget {
    pub tense: Tense,
    pub person: Person,
    pub number: Number,
    pub verb_form: VerbForm,
}

impl MorphTarget {
    pub const fn finite(tense: Tense, person: Person, number: Number) -> Self {
        MorphTarget {
            tense,
            person,
            number,
            verb_form: VerbForm::Finite,
        }
    }

    pub const fn past() -> Self {
        Self::finite(Tense::Past, Person::Third, Number::Singular)
    }

    pub const fn third_singular() -> Self {
        Self::finite(Tense::Present, Person::Third, Number::Singular)
    }

    /// Present tense, not third person singular.
    pub const fn present_plain() -> Self {
        Self::finite(Tense::Present, Person::First, Number::Singular)
    }

    pub const fn with_form(verb_form: VerbForm) -> Self {
        MorphTarget {
            tense: Tense::Present,
            person: Person::Third,
            number: Number::Singular,
            verb_form,
        }
    }

    pub const fn bare() -> Self {
        Self::with_form(VerbForm::BareInfinitive)
    }

    pub fn is_third_singular_present(&self) -> bool {
        self.verb_form == VerbForm::Finite
            && self.tense == Tense::Present
            && self.person == Person::Third
            && self.number == Number::Singular
    }

    /// Features implied by a Penn verb tag; `None` for non-verbal tags.
    pub fn from_fine_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "VBD" => Self::past(),
            "VBZ" => Self::third_singular(),
            "VBP" => Self::present_plain(),
            "VB" => Self::bare(),
            "VBN" => Self::with_form(VerbForm::PastParticiple),
            "VBG" => Self::with_form(VerbForm::Gerund),
            _ => return None,
        })
    }
}
