//! Rule-based sentence negation, CoNLL-U handling, negated-pair dataset
//! construction and a metric sensitivity harness.

pub mod analyzer;
pub mod conllu;
pub mod dataset;
pub mod engine;
pub mod eval;
pub mod lexicon;
pub mod linguistic;
pub mod morphology;
pub mod negator;

pub use analyzer::{AnalyzeError, Analyzer};
pub use conllu::{emit_conllu, parse_conllu, ConlluDocument, ConlluError};
pub use lexicon::{LexiconError, Resources};
pub use linguistic::{detokenize, CoarsePos, ParsedSentence, Token, TreeError};
pub use morphology::{ContractionTable, VerbLexicon};
pub use negator::{is_negated, negate, Branch, NegationError, NegationOutcome, Negator, NegatorOptions};
pub use engine::{NegateTextError, NegationEngine, ParseError, ParserProvider, TextNegator};
