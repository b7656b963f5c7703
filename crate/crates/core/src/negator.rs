//! Rule-based addition and removal of verbal negation.
//!
//! Five branches, chosen from the dependency structure of the root clause:
//!
//! 1. negated, cue on auxiliary "do" governed by a full verb: drop "do" and
//!    the cue, re-inflect the verb ("didn't know" -> "knew");
//! 2. negated, any other host: drop the cue, restoring a contracted host
//!    ("won't" -> "will", "have never been" -> "have been");
//! 3. affirmative with a full-verb root: insert do-support and negation
//!    ("enjoyed" -> "did not enjoy");
//! 4. affirmative with auxiliary children: negate the first one
//!    ("will be" -> "won't be");
//! 5. affirmative auxiliary or copula without auxiliaries: negate it
//!    ("'m very hungry" -> "'m not very hungry").

use std::sync::Arc;

use thiserror::Error;

use crate::lexicon::Resources;
use crate::linguistic::{detokenize, normalize_apostrophes, CoarsePos, MorphTarget, ParsedSentence, Token};
use crate::morphology::{capitalize, conjugate_do, match_case};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NegationError {
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
}

fn unsupported(reason: impl Into<String>) -> NegationError {
    NegationError::UnsupportedStructure(reason.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    RemoveDo = 1,
    RemoveCue = 2,
    AddDo = 3,
    NegateFirstAux = 4,
    NegateRootAux = 5,
}

impl Branch {
    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn removes_negation(self) -> bool {
        matches!(self, Branch::RemoveDo | Branch::RemoveCue)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegatorOptions {
    pub prefer_contractions: bool,
}

impl Default for NegatorOptions {
    fn default() -> Self {
        NegatorOptions {
            prefer_contractions: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationOutcome {
    pub text: String,
    pub branch: Branch,
    pub removed_cues: Vec<String>,
    pub added_tokens: Vec<String>,
    pub contracted: bool,
}

/// True iff some token is a negation cue.
pub fn is_negated(sentence: &ParsedSentence) -> bool {
    sentence.tokens().iter().any(Token::is_negation_cue)
}

/// Negates with the bundled lexical resources.
pub fn negate(
    sentence: &ParsedSentence,
    options: &NegatorOptions,
) -> Result<NegationOutcome, NegationError> {
    Negator::default().negate(sentence, options)
}

#[derive(Debug, Clone)]
pub struct Negator {
    resources: Arc<Resources>,
}

impl Default for Negator {
    fn default() -> Self {
        Negator::new(Resources::shared())
    }
}

fn is_verbal(t: &Token) -> bool {
    matches!(t.coarse_pos, CoarsePos::Verb | CoarsePos::Aux)
        || t.fine_tag.starts_with("VB")
        || t.fine_tag == "MD"
}

fn is_full_verb(t: &Token) -> bool {
    t.coarse_pos == CoarsePos::Verb
}

impl Negator {
    pub fn new(resources: Arc<Resources>) -> Self {
        Negator { resources }
    }

    pub fn negate(
        &self,
        sentence: &ParsedSentence,
        options: &NegatorOptions,
    ) -> Result<NegationOutcome, NegationError> {
        let cues: Vec<&Token> = sentence
            .tokens()
            .iter()
            .filter(|t| t.is_negation_cue())
            .collect();
        match cues.as_slice() {
            [] => self.add_negation(sentence, options),
            [cue] => self.remove_negation(sentence, cue),
            _ => Err(unsupported("more than one negation cue")),
        }
    }

    fn is_auxiliary_like(&self, t: &Token) -> bool {
        t.coarse_pos == CoarsePos::Aux
            || t.fine_tag == "MD"
            || t.is_auxiliary_relation()
            || t.is_copula_relation()
            || (self.resources.lexicons.auxiliary(&t.surface).is_some() && !is_full_verb(t))
    }

    fn lemma_of(&self, t: &Token) -> String {
        if !t.lemma.is_empty() {
            return t.lemma.to_lowercase();
        }
        let lower = t.surface.to_lowercase();
        match self.resources.lexicons.auxiliary(&lower) {
            Some(entry) => entry.lemma.clone(),
            None => self.resources.verbs.lemmatize_verb(&lower),
        }
    }

    /// Inflectional features of a finite verb token.
    fn features_of(&self, t: &Token) -> MorphTarget {
        if let Some(target) = MorphTarget::from_fine_tag(&t.fine_tag) {
            return target;
        }
        if let Some(entry) = self.resources.lexicons.auxiliary(&t.surface) {
            return entry.target;
        }
        let verbs = &self.resources.verbs;
        let lower = t.surface.to_lowercase();
        let lemma = self.lemma_of(t);
        if lower != lemma && verbs.inflect_verb(&lemma, MorphTarget::past()) == lower {
            MorphTarget::past()
        } else if verbs.inflect_verb(&lemma, MorphTarget::third_singular()) == lower {
            MorphTarget::third_singular()
        } else {
            MorphTarget::present_plain()
        }
    }

    /// The auxiliary the cue negates: the closest auxiliary before the cue
    /// among the cue's head and the head's auxiliary/copula dependents.
    fn cue_host<'a>(&self, sentence: &'a ParsedSentence, cue: &Token) -> Option<&'a Token> {
        let head = sentence.token(cue.head)?;
        let head_is_aux = self.is_auxiliary_like(head);
        let mut candidates: Vec<&Token> = sentence
            .tokens()
            .iter()
            .filter(|t| t.head == head.index && (t.is_auxiliary_relation() || t.is_copula_relation()))
            .collect();
        if head_is_aux {
            candidates.push(head);
        }
        candidates
            .iter()
            .filter(|t| t.index < cue.index)
            .max_by_key(|t| t.index)
            .copied()
            .or(if head_is_aux { Some(head) } else { None })
    }

    fn remove_negation(
        &self,
        sentence: &ParsedSentence,
        cue: &Token,
    ) -> Result<NegationOutcome, NegationError> {
        let root = sentence.root();
        let in_root_clause = cue.head == root.index
            || sentence.token(cue.head).is_some_and(|h| {
                h.head == root.index && (h.is_auxiliary_relation() || h.is_copula_relation())
            });
        if !in_root_clause {
            return Err(unsupported("negation outside the main clause"));
        }
        let host = self.cue_host(sentence, cue);
        let mut tokens = sentence.tokens().to_vec();

        let do_support = host.filter(|h| self.lemma_of(h) == "do" && h.is_auxiliary_relation());
        if let Some(do_token) = do_support {
            if let Some(verb) = sentence.token(do_token.head).filter(|v| is_full_verb(v)) {
                let other_aux = sentence.tokens().iter().any(|t| {
                    t.head == verb.index && t.index != do_token.index && t.is_auxiliary_relation()
                });
                if other_aux {
                    return Err(unsupported("do-support combined with another auxiliary"));
                }
                let target = self.features_of(do_token);
                let lemma = self.lemma_of(verb);
                let inflected = self.resources.verbs.inflect_verb(&lemma, target);
                tokens[verb.index - 1].surface = match_case(&verb.surface, &inflected);
                let removed = vec![do_token.surface.clone(), cue.surface.clone()];
                let text = delete_tokens(tokens, &[do_token.index, cue.index]);
                return Ok(NegationOutcome {
                    text,
                    branch: Branch::RemoveDo,
                    removed_cues: removed,
                    added_tokens: Vec::new(),
                    contracted: false,
                });
            }
        }

        if normalize_apostrophes(&cue.surface.to_lowercase()) == "n't" {
            if let Some(h) = host {
                if let Some(full) = self.resources.contractions.host_full_form(&h.surface) {
                    tokens[h.index - 1].surface = full;
                }
            }
        }
        let text = delete_tokens(tokens, &[cue.index]);
        Ok(NegationOutcome {
            text,
            branch: Branch::RemoveCue,
            removed_cues: vec![cue.surface.clone()],
            added_tokens: Vec::new(),
            contracted: false,
        })
    }

    fn add_negation(
        &self,
        sentence: &ParsedSentence,
        options: &NegatorOptions,
    ) -> Result<NegationOutcome, NegationError> {
        let root = sentence.root();
        let children = sentence
            .children_of(root.index)
            .map_err(|e| unsupported(e.to_string()))?;
        let first_aux = children.iter().find(|t| t.is_auxiliary_relation()).copied();
        let first_cop = children.iter().find(|t| t.is_copula_relation()).copied();

        if !is_verbal(root) {
            let first_either = children
                .iter()
                .find(|t| t.is_auxiliary_relation() || t.is_copula_relation())
                .copied();
            return match (first_aux, first_cop) {
                (Some(_), _) => self.negate_auxiliary(sentence, first_either.unwrap(), Branch::NegateFirstAux, options),
                (None, Some(cop)) => self.negate_auxiliary(sentence, cop, Branch::NegateRootAux, options),
                (None, None) => Err(unsupported("no verb, auxiliary or copula in the main clause")),
            };
        }
        if let Some(aux) = first_aux {
            return self.negate_auxiliary(sentence, aux, Branch::NegateFirstAux, options);
        }
        let root_lemma = self.lemma_of(root);
        if root.coarse_pos == CoarsePos::Aux || root.fine_tag == "MD" || root_lemma == "be" {
            return self.negate_auxiliary(sentence, root, Branch::NegateRootAux, options);
        }
        self.add_do_support(sentence, root, options)
    }

    fn add_do_support(
        &self,
        sentence: &ParsedSentence,
        root: &Token,
        options: &NegatorOptions,
    ) -> Result<NegationOutcome, NegationError> {
        if root.index == 1 {
            return Err(unsupported("no subject before the verb"));
        }
        if matches!(root.fine_tag.as_str(), "VB" | "VBN" | "VBG") {
            return Err(unsupported(format!(
                "root verb '{}' is not finite and has no auxiliary",
                root.surface
            )));
        }
        let target = self.features_of(root);
        let do_form = conjugate_do(target).to_string();
        let lemma = self.lemma_of(root);
        let bare = self.resources.verbs.inflect_verb(&lemma, MorphTarget::bare());

        let mut tokens = sentence.tokens().to_vec();
        tokens[root.index - 1].surface = match_case(&root.surface, &bare);
        let contract = options.prefer_contractions;
        let (do_token, neg_token) = negation_pair(&do_form, contract);
        let added = vec![do_token.surface.clone(), neg_token.surface.clone()];
        tokens.splice(root.index - 1..root.index - 1, [do_token, neg_token]);
        Ok(NegationOutcome {
            text: detokenize(&tokens),
            branch: Branch::AddDo,
            removed_cues: Vec::new(),
            added_tokens: added,
            contracted: contract,
        })
    }

    fn negate_auxiliary(
        &self,
        sentence: &ParsedSentence,
        aux: &Token,
        branch: Branch,
        options: &NegatorOptions,
    ) -> Result<NegationOutcome, NegationError> {
        if aux.index == 1 {
            return Err(unsupported("sentence-initial auxiliary"));
        }
        let mut tokens = sentence.tokens().to_vec();
        let clitic = aux.surface.starts_with('\'') || aux.surface.starts_with('\u{2019}');
        let host = if options.prefer_contractions && !clitic {
            self.resources.contractions.contraction_host(&aux.surface)
        } else {
            None
        };
        let slot = aux.index;
        let (inserted, contracted) = match host {
            Some(host) => {
                let position = &mut tokens[aux.index - 1];
                let mut neg = Token::new(0, "n't");
                neg.space_after = position.space_after;
                position.surface = host;
                position.space_after = false;
                (neg, true)
            }
            None => {
                let position = &mut tokens[aux.index - 1];
                let mut neg = Token::new(0, "not");
                neg.space_after = position.space_after;
                position.space_after = true;
                (neg, false)
            }
        };
        let added = vec![inserted.surface.clone()];
        tokens.insert(slot, inserted);
        Ok(NegationOutcome {
            text: detokenize(&tokens),
            branch,
            removed_cues: Vec::new(),
            added_tokens: added,
            contracted,
        })
    }
}

fn negation_pair(do_form: &str, contract: bool) -> (Token, Token) {
    let mut do_token = Token::new(0, do_form);
    let mut neg = Token::new(0, if contract { "n't" } else { "not" });
    do_token.space_after = !contract;
    neg.space_after = true;
    (do_token, neg)
}

/// Removes tokens by 1-based index. A removed token's trailing space moves
/// to its predecessor; removing the first token capitalizes the new first
/// token.
fn delete_tokens(mut tokens: Vec<Token>, indices: &[usize]) -> String {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    let removed_first = sorted.first() == Some(&1);
    let first_was_upper = tokens[0].surface.chars().next().is_some_and(char::is_uppercase);
    for (shift, index) in sorted.into_iter().enumerate() {
        let at = index - 1 - shift;
        let gone = tokens.remove(at);
        if at > 0 {
            tokens[at - 1].space_after = gone.space_after;
        }
    }
    if removed_first && first_was_upper {
        if let Some(first) = tokens.first_mut() {
            if !first.coarse_pos.is_proper_noun() {
                first.surface = capitalize(&first.surface);
            }
        }
    }
    detokenize(&tokens)
}
