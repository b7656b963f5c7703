//! Text-level negation: a parser provider followed by the negator.

use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Stdio};
use std::sync::Arc;

use thiserror::Error;

use crate::analyzer::{AnalyzeError, Analyzer};
use crate::conllu::{parse_conllu, ConlluDocument, ConlluError};
use crate::lexicon::Resources;
use crate::linguistic::ParsedSentence;
use crate::negator::{NegationError, NegationOutcome, Negator, NegatorOptions};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
    #[error("malformed CoNLL-U: {0}")]
    Conllu(#[from] ConlluError),
    #[error("no fixture parse for sentence {0:?}")]
    MissingFixture(String),
    #[error("external parser failed: {0}")]
    Command(String),
}

#[derive(Debug, Error)]
pub enum NegateTextError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse stage: {0}")]
    Parse(#[from] ParseError),
    #[error("negation stage: {0}")]
    Negate(#[from] NegationError),
}

/// Where dependency parses come from.
#[derive(Debug, Clone)]
pub enum ParserProvider {
    Builtin(Analyzer),
    /// Pre-parsed sentences looked up by their text.
    ConlluFixture(HashMap<String, ParsedSentence>),
    /// Shell command reading sentences (one per line) on stdin and writing
    /// CoNLL-U on stdout.
    ExternalCommand(String),
}

impl ParserProvider {
    pub fn builtin() -> Self {
        ParserProvider::Builtin(Analyzer::default())
    }

    pub fn from_conllu(doc: ConlluDocument) -> Self {
        let map = doc
            .sentences
            .into_iter()
            .map(|s| (s.text().trim().to_string(), s))
            .collect();
        ParserProvider::ConlluFixture(map)
    }

    pub fn from_conllu_str(input: &str) -> Result<Self, ConlluError> {
        parse_conllu(input).map(Self::from_conllu)
    }

    pub fn parse(&self, text: &str) -> Result<ParsedSentence, ParseError> {
        self.parse_batch(&[text]).pop().expect("one result per input")
    }

    /// One result per input, in input order.
    pub fn parse_batch<S: AsRef<str>>(&self, texts: &[S]) -> Vec<Result<ParsedSentence, ParseError>> {
        match self {
            ParserProvider::Builtin(analyzer) => texts
                .iter()
                .map(|t| analyzer.analyze(t.as_ref()).map_err(ParseError::from))
                .collect(),
            ParserProvider::ConlluFixture(map) => texts
                .iter()
                .map(|t| {
                    let key = t.as_ref().trim();
                    map.get(key)
                        .cloned()
                        .ok_or_else(|| ParseError::MissingFixture(key.to_string()))
                })
                .collect(),
            ParserProvider::ExternalCommand(cmd) => match run_external(cmd, texts) {
                Ok(sentences) => sentences.into_iter().map(Ok).collect(),
                Err(e) => texts
                    .iter()
                    .map(|_| Err(ParseError::Command(e.to_string())))
                    .collect(),
            },
        }
    }
}

fn run_external<S: AsRef<str>>(cmd: &str, texts: &[S]) -> Result<Vec<ParsedSentence>, ParseError> {
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .map_err(|e| ParseError::Command(format!("cannot start `{cmd}`: {e}")))?;
    let mut input = String::new();
    for t in texts {
        input.push_str(t.as_ref().trim());
        input.push('\n');
    }
    let mut stdin = child.stdin.take().expect("piped stdin");
    let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
    let output = child
        .wait_with_output()
        .map_err(|e| ParseError::Command(e.to_string()))?;
    let _ = writer.join();
    if !output.status.success() {
        return Err(ParseError::Command(format!("`{cmd}` exited with {}", output.status)));
    }
    let stdout = String::from_utf8(output.stdout)
        .map_err(|_| ParseError::Command("output is not UTF-8".into()))?;
    let doc = parse_conllu(&stdout)?;
    if doc.sentences.len() != texts.len() {
        return Err(ParseError::Command(format!(
            "expected {} parses, got {}",
            texts.len(),
            doc.sentences.len()
        )));
    }
    Ok(doc.sentences)
}

/// Anything that can negate raw text.
pub trait TextNegator: Send + Sync {
    fn negate_text(&self, text: &str) -> Result<NegationOutcome, NegateTextError>;
}

#[derive(Debug, Clone)]
pub struct NegationEngine {
    pub parser: ParserProvider,
    pub negator: Negator,
    pub options: NegatorOptions,
}

impl Default for NegationEngine {
    fn default() -> Self {
        NegationEngine::new(ParserProvider::builtin(), NegatorOptions::default())
    }
}

impl NegationEngine {
    pub fn new(parser: ParserProvider, options: NegatorOptions) -> Self {
        NegationEngine {
            parser,
            negator: Negator::default(),
            options,
        }
    }

    pub fn with_resources(parser: ParserProvider, options: NegatorOptions, resources: Arc<Resources>) -> Self {
        let parser = match parser {
            ParserProvider::Builtin(_) => ParserProvider::Builtin(Analyzer::new(Arc::clone(&resources))),
            other => other,
        };
        NegationEngine {
            parser,
            negator: Negator::new(resources),
            options,
        }
    }

    pub fn negate_parsed(&self, sentence: &ParsedSentence) -> Result<NegationOutcome, NegationError> {
        self.negator.negate(sentence, &self.options)
    }

    pub fn negate_text(&self, text: &str) -> Result<NegationOutcome, NegateTextError> {
        self.negate_batch(&[text]).pop().expect("one result per input")
    }

    /// Parses all inputs in one provider call, then negates each.
    pub fn negate_batch<S: AsRef<str>>(&self, texts: &[S]) -> Vec<Result<NegationOutcome, NegateTextError>> {
        let mut results: Vec<Option<Result<NegationOutcome, NegateTextError>>> = Vec::with_capacity(texts.len());
        let mut to_parse = Vec::new();
        for t in texts {
            if t.as_ref().trim().is_empty() {
                results.push(Some(Err(NegateTextError::InvalidArgument("empty input".into()))));
            } else {
                results.push(None);
                to_parse.push(t.as_ref());
            }
        }
        let mut parses = self.parser.parse_batch(&to_parse).into_iter();
        results
            .into_iter()
            .map(|slot| match slot {
                Some(done) => done,
                None => {
                    let parsed = parses.next().expect("one parse per non-empty input")?;
                    Ok(self.negate_parsed(&parsed)?)
                }
            })
            .collect()
    }
}

impl TextNegator for NegationEngine {
    fn negate_text(&self, text: &str) -> Result<NegationOutcome, NegateTextError> {
        NegationEngine::negate_text(self, text)
    }
}
