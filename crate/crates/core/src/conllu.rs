//! CoNLL-U reading and writing.
//!
//! Only the columns the negator uses are kept: ID, FORM, LEMMA, UPOS,
//! XPOS, HEAD, DEPREL and the `SpaceAfter=No` flag from MISC. Multiword
//! range lines are skipped (their syntactic words are kept); empty nodes
//! are rejected.

use std::fmt::Write as _;

use thiserror::Error;

use crate::linguistic::{CoarsePos, ParsedSentence, Token, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConlluErrorKind {
    #[error("expected 10 tab-separated columns, found {0}")]
    ColumnCount(usize),
    #[error("non-numeric ID {0:?}")]
    NonNumericId(String),
    #[error("non-numeric HEAD {0:?}")]
    NonNumericHead(String),
    #[error("empty nodes are not supported (ID {0:?})")]
    EmptyNode(String),
    #[error("malformed multiword range {0:?}")]
    BadRange(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ConlluError {
    pub line: usize,
    pub kind: ConlluErrorKind,
}

/// Sentences plus the `#` comment lines that preceded each of them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConlluDocument {
    pub sentences: Vec<ParsedSentence>,
    /// One list per sentence, lines kept verbatim including the `#`.
    pub comments: Vec<Vec<String>>,
}

impl ConlluDocument {
    pub fn iter(&self) -> impl Iterator<Item = (&[String], &ParsedSentence)> {
        self.comments
            .iter()
            .map(Vec::as_slice)
            .zip(self.sentences.iter())
    }

    pub fn push(&mut self, comments: Vec<String>, sentence: ParsedSentence) {
        self.comments.push(comments);
        self.sentences.push(sentence);
    }
}

struct Row {
    line: usize,
    token: Token,
    has_space_annotation: bool,
}

pub fn parse_conllu(input: &str) -> Result<ConlluDocument, ConlluError> {
    let mut doc = ConlluDocument::default();
    let mut comments = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut block_start = 1;

    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !rows.is_empty() || !comments.is_empty() {
                flush(&mut doc, &mut comments, &mut rows, block_start)?;
            }
            block_start = line_no + 1;
            continue;
        }
        if line.starts_with('#') {
            comments.push(line.to_string());
            continue;
        }
        if let Some(row) = parse_row(line, line_no)? {
            rows.push(row);
        }
    }
    if !rows.is_empty() || !comments.is_empty() {
        flush(&mut doc, &mut comments, &mut rows, block_start)?;
    }
    Ok(doc)
}

fn parse_row(line: &str, line_no: usize) -> Result<Option<Row>, ConlluError> {
    let err = |kind| ConlluError { line: line_no, kind };
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(err(ConlluErrorKind::ColumnCount(cols.len())));
    }
    let id = cols[0];
    if let Some((a, b)) = id.split_once('-') {
        if a.parse::<usize>().is_err() || b.parse::<usize>().is_err() {
            return Err(err(ConlluErrorKind::BadRange(id.to_string())));
        }
        return Ok(None);
    }
    if id.contains('.') {
        return Err(err(ConlluErrorKind::EmptyNode(id.to_string())));
    }
    let index: usize = id
        .parse()
        .map_err(|_| err(ConlluErrorKind::NonNumericId(id.to_string())))?;
    let head: usize = cols[6]
        .parse()
        .map_err(|_| err(ConlluErrorKind::NonNumericHead(cols[6].to_string())))?;
    let unset = |s: &str| if s == "_" { String::new() } else { s.to_string() };
    let misc = cols[9];
    let has_space_annotation = misc.split('|').any(|kv| kv.starts_with("SpaceAfter="));
    let space_after = !misc.split('|').any(|kv| kv == "SpaceAfter=No");
    Ok(Some(Row {
        line: line_no,
        has_space_annotation,
        token: Token {
            index,
            surface: cols[1].to_string(),
            lemma: unset(cols[2]),
            coarse_pos: CoarsePos::parse(cols[3]),
            fine_tag: unset(cols[4]),
            head,
            deprel: unset(cols[7]),
            space_after,
        },
    }))
}

fn flush(
    doc: &mut ConlluDocument,
    comments: &mut Vec<String>,
    rows: &mut Vec<Row>,
    block_start: usize,
) -> Result<(), ConlluError> {
    let rows_taken = std::mem::take(rows);
    let comments_taken = std::mem::take(comments);
    let lines: Vec<usize> = rows_taken.iter().map(|r| r.line).collect();
    let annotated = rows_taken.iter().any(|r| r.has_space_annotation);
    let mut tokens: Vec<Token> = rows_taken.into_iter().map(|r| r.token).collect();

    let text_comment = comments_taken.iter().find_map(|c| text_from_comment(c));
    if !annotated {
        let aligned = text_comment
            .as_deref()
            .and_then(|text| spacing_from_text(&tokens, text));
        match aligned {
            Some(flags) => {
                for (token, flag) in tokens.iter_mut().zip(flags) {
                    token.space_after = flag;
                }
            }
            None => apply_default_spacing(&mut tokens),
        }
    }

    let text = match text_comment {
        Some(t) => t,
        None => crate::linguistic::detokenize(&tokens),
    };
    let sentence = ParsedSentence::new(tokens, text).map_err(|e| {
        let line = match &e {
            TreeError::IndexGap { position, .. } => lines.get(position - 1).copied(),
            TreeError::EmptySurface { index }
            | TreeError::HeadOutOfRange { index, .. }
            | TreeError::SelfLoop { index }
            | TreeError::Cycle { index } => lines.get(index - 1).copied(),
            TreeError::MultipleRoots(roots) => roots.get(1).and_then(|i| lines.get(i - 1)).copied(),
            _ => None,
        };
        ConlluError {
            line: line.unwrap_or(block_start),
            kind: e.into(),
        }
    })?;
    doc.push(comments_taken, sentence);
    Ok(())
}

fn text_from_comment(comment: &str) -> Option<String> {
    let rest = comment.strip_prefix('#')?.trim_start();
    let rest = rest.strip_prefix("text")?.trim_start();
    let value = rest.strip_prefix('=')?;
    Some(value.trim().to_string())
}

/// Spacing flags recovered by aligning token surfaces against the raw
/// text; `None` if the surfaces do not spell out the text.
fn spacing_from_text(tokens: &[Token], text: &str) -> Option<Vec<bool>> {
    let mut rest = text;
    let mut flags = Vec::with_capacity(tokens.len());
    for token in tokens {
        rest = rest.strip_prefix(token.surface.as_str())?;
        let trimmed = rest.trim_start();
        flags.push(trimmed.len() != rest.len());
        rest = trimmed;
    }
    rest.is_empty().then_some(flags)
}

fn attaches_left(surface: &str) -> bool {
    let s = crate::linguistic::normalize_apostrophes(surface);
    s.starts_with('\'') && s.len() > 1
        || (!s.is_empty() && s.chars().all(|c| matches!(c, '.' | ',' | '!' | '?' | ';' | ':' | ')' | ']' | '}' | '%')))
        || s.eq_ignore_ascii_case("n't")
}

/// Without spacing information every token is followed by a space, except
/// before closing punctuation and apostrophe clitics.
pub(crate) fn apply_default_spacing(tokens: &mut [Token]) {
    for i in 0..tokens.len() {
        let next_attaches = tokens
            .get(i + 1)
            .is_some_and(|next| attaches_left(&next.surface));
        tokens[i].space_after = !next_attaches;
    }
}

pub fn emit_conllu(doc: &ConlluDocument) -> String {
    let mut out = String::new();
    for (comments, sentence) in doc.iter() {
        for c in comments {
            out.push_str(c);
            out.push('\n');
        }
        for t in sentence.tokens() {
            let field = |s: &str| if s.is_empty() { "_".to_string() } else { s.to_string() };
            let misc = if t.space_after { "_" } else { "SpaceAfter=No" };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t_\t{}\t{}\t_\t{}",
                t.index,
                t.surface,
                field(&t.lemma),
                t.coarse_pos,
                field(&t.fine_tag),
                t.head,
                field(&t.deprel),
                misc
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const KNEW: &str = "# text = I knew .\n\
1\tI\tI\tPRON\tPRP\t_\t2\tnsubj\t_\t_\n\
2\tknew\tknow\tVERB\tVBD\t_\t0\troot\t_\t_\n\
3\t.\t.\tPUNCT\t.\t_\t2\tpunct\t_\t_\n\n";

    #[test]
    fn parses_simple_block() {
        let doc = parse_conllu(KNEW).unwrap();
        assert_eq!(doc.sentences.len(), 1);
        let s = &doc.sentences[0];
        assert_eq!(s.len(), 3);
        assert_eq!(s.root().surface, "knew");
        assert_eq!(s.root().lemma, "know");
        assert_eq!(s.root().coarse_pos, CoarsePos::Verb);
        assert_eq!(s.root().fine_tag, "VBD");
        assert_eq!(s.tokens()[0].head, 2);
        assert_eq!(s.tokens()[2].deprel, "punct");
        assert_eq!(s.text(), "I knew .");
        assert_eq!(doc.comments[0], vec!["# text = I knew .".to_string()]);
    }

    #[test]
    fn empty_input_has_no_sentences() {
        assert_eq!(parse_conllu("").unwrap().sentences.len(), 0);
        assert_eq!(emit_conllu(&ConlluDocument::default()), "");
    }

    #[test]
    fn non_numeric_head_names_line() {
        let bad = "1\tI\tI\tPRON\tPRP\t_\t2\tnsubj\t_\t_\n2\tgo\tgo\tVERB\tVBP\t_\tx\troot\t_\t_\n";
        let err = parse_conllu(bad).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ConlluErrorKind::NonNumericHead(ref h) if h == "x"));
    }

    #[test]
    fn structural_errors() {
        let cols = "1\tI\tI\tPRON\n";
        assert!(matches!(
            parse_conllu(cols).unwrap_err().kind,
            ConlluErrorKind::ColumnCount(4)
        ));
        let id = "a\tI\tI\tPRON\tPRP\t_\t0\troot\t_\t_\n";
        assert!(matches!(
            parse_conllu(id).unwrap_err().kind,
            ConlluErrorKind::NonNumericId(_)
        ));
        let empty_node = "1\tI\tI\tPRON\tPRP\t_\t0\troot\t_\t_\n1.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n";
        assert!(matches!(
            parse_conllu(empty_node).unwrap_err().kind,
            ConlluErrorKind::EmptyNode(_)
        ));
        let gap = "1\tI\tI\tPRON\tPRP\t_\t3\tnsubj\t_\t_\n3\tgo\tgo\tVERB\tVBP\t_\t0\troot\t_\t_\n";
        let err = parse_conllu(gap).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ConlluErrorKind::Tree(TreeError::IndexGap { .. })));
        let two_roots = "1\tI\tI\tPRON\tPRP\t_\t0\troot\t_\t_\n2\tgo\tgo\tVERB\tVBP\t_\t0\troot\t_\t_\n";
        let err = parse_conllu(two_roots).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ConlluErrorKind::Tree(TreeError::MultipleRoots(_))));
    }

    #[test]
    fn multiword_ranges_are_skipped() {
        let mwt = "# text = I didn't go.\n\
1\tI\tI\tPRON\tPRP\t_\t4\tnsubj\t_\t_\n\
2-3\tdidn't\t_\t_\t_\t_\t_\t_\t_\t_\n\
2\tdid\tdo\tAUX\tVBD\t_\t4\taux\t_\t_\n\
3\tn't\tnot\tPART\tRB\t_\t4\tneg\t_\t_\n\
4\tgo\tgo\tVERB\tVB\t_\t0\troot\t_\tSpaceAfter=No\n\
5\t.\t.\tPUNCT\t.\t_\t4\tpunct\t_\t_\n";
        let doc = parse_conllu(mwt).unwrap();
        let s = &doc.sentences[0];
        assert_eq!(s.len(), 5);
        assert_eq!(s.tokens()[1].surface, "did");
        // annotated spacing wins over the text comment
        assert!(s.tokens()[1].space_after);
    }

    #[test]
    fn spacing_from_text_comment() {
        let doc = parse_conllu(
            "# text = I didn't go.\n\
1\tI\t_\tPRON\t_\t_\t4\tnsubj\t_\t_\n\
2\tdid\t_\tAUX\t_\t_\t4\taux\t_\t_\n\
3\tn't\t_\tPART\t_\t_\t4\tneg\t_\t_\n\
4\tgo\t_\tVERB\t_\t_\t0\troot\t_\t_\n\
5\t.\t_\tPUNCT\t_\t_\t4\tpunct\t_\t_\n",
        )
        .unwrap();
        let s = &doc.sentences[0];
        assert_eq!(crate::linguistic::detokenize(s.tokens()), "I didn't go.");
        assert_eq!(s.text(), "I didn't go.");
    }

    #[test]
    fn default_spacing_without_any_information() {
        let doc = parse_conllu(
            "1\tI\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n\
2\t'm\t_\tAUX\t_\t_\t0\troot\t_\t_\n\
3\thungry\t_\tADJ\t_\t_\t2\tdep\t_\t_\n\
4\t.\t_\tPUNCT\t_\t_\t2\tpunct\t_\t_\n",
        )
        .unwrap();
        assert_eq!(doc.sentences[0].text(), "I'm hungry.");
    }

    #[test]
    fn one_token_sentence_emits_one_line() {
        let doc = parse_conllu("1\tHi\thi\tOTHER\t_\t_\t0\troot\t_\t_\n").unwrap();
        let out = emit_conllu(&doc);
        assert_eq!(out, "1\tHi\thi\tOTHER\t_\t_\t0\troot\t_\t_\n\n");
        assert_eq!(out.lines().next().unwrap().split('\t').count(), 10);
    }

    #[test]
    fn canonical_fixture_round_trips_byte_for_byte() {
        let fixture = include_str!("../tests/fixtures/table2.conllu");
        let doc = parse_conllu(fixture).unwrap();
        assert!(doc.sentences.len() >= 5);
        assert_eq!(emit_conllu(&doc), fixture);
        assert_eq!(parse_conllu(&emit_conllu(&doc)).unwrap(), doc);
    }
}
