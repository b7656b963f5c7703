//! Column-mapped TSV / JSON-lines readers and the pair TSV format.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DatasetError, SentencePair, Source, Split};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    #[default]
    Tsv,
    Jsonl,
}

/// A column given by header name / JSON key, or by 0-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnMap {
    pub reference: Option<ColumnRef>,
    pub candidate: Option<ColumnRef>,
    pub label: Option<ColumnRef>,
    pub score: Option<ColumnRef>,
}

/// One input row with the mapped fields pulled out.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    pub reference: Option<String>,
    pub candidate: Option<String>,
    pub label: Option<String>,
    pub score: Option<String>,
    pub line: usize,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_err(path: &Path, message: impl Into<String>) -> DatasetError {
    DatasetError::Read {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Collapses tabs and newlines so values survive the TSV output format.
fn clean(value: &str) -> String {
    value.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn read_records(
    path: &Path,
    format: InputFormat,
    has_header: bool,
    columns: &ColumnMap,
) -> Result<Vec<Record>, DatasetError> {
    match format {
        InputFormat::Tsv => read_tsv_records(path, has_header, columns),
        InputFormat::Jsonl => read_jsonl_records(path, columns),
    }
}

fn read_tsv_records(path: &Path, has_header: bool, columns: &ColumnMap) -> Result<Vec<Record>, DatasetError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let mut header: HashMap<String, usize> = HashMap::new();
    if has_header {
        if let Some((_, line)) = lines.next() {
            let line = line.map_err(io_err(path))?;
            header = line
                .trim_end_matches('\r')
                .split('\t')
                .enumerate()
                .map(|(i, h)| (h.trim().to_string(), i))
                .collect();
        }
    }
    let resolve = |c: &Option<ColumnRef>| -> Result<Option<usize>, DatasetError> {
        match c {
            None => Ok(None),
            Some(ColumnRef::Index(i)) => Ok(Some(*i)),
            Some(ColumnRef::Name(name)) => header
                .get(name)
                .copied()
                .map(Some)
                .ok_or_else(|| read_err(path, format!("no column named {name:?} in header"))),
        }
    };
    let idx = [
        resolve(&columns.reference)?,
        resolve(&columns.candidate)?,
        resolve(&columns.label)?,
        resolve(&columns.score)?,
    ];
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(io_err(path))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let get = |k: Option<usize>| -> Result<Option<String>, DatasetError> {
            match k {
                None => Ok(None),
                Some(k) => fields
                    .get(k)
                    .map(|v| Some(clean(v)))
                    .ok_or_else(|| read_err(path, format!("line {}: missing column {k}", i + 1))),
            }
        };
        out.push(Record {
            reference: get(idx[0])?,
            candidate: get(idx[1])?,
            label: get(idx[2])?,
            score: get(idx[3])?,
            line: i + 1,
        });
    }
    Ok(out)
}

fn read_jsonl_records(path: &Path, columns: &ColumnMap) -> Result<Vec<Record>, DatasetError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line)
            .map_err(|e| read_err(path, format!("line {}: {e}", i + 1)))?;
        let get = |c: &Option<ColumnRef>| -> Result<Option<String>, DatasetError> {
            let Some(c) = c else { return Ok(None) };
            let v = match c {
                ColumnRef::Name(name) => value.get(name),
                ColumnRef::Index(k) => value.get(*k),
            };
            match v {
                None | Some(serde_json::Value::Null) => Err(read_err(path, format!("line {}: missing field {c:?}", i + 1))),
                Some(serde_json::Value::String(s)) => Ok(Some(clean(s))),
                Some(other) => Ok(Some(other.to_string())),
            }
        };
        out.push(Record {
            reference: get(&columns.reference)?,
            candidate: get(&columns.candidate)?,
            label: get(&columns.label)?,
            score: get(&columns.score)?,
            line: i + 1,
        });
    }
    Ok(out)
}

/// Two-column TSV: reference, paraphrase. Later duplicates win.
pub fn read_paraphrases(path: &Path) -> Result<HashMap<String, String>, DatasetError> {
    let columns = ColumnMap {
        reference: Some(ColumnRef::Index(0)),
        candidate: Some(ColumnRef::Index(1)),
        ..ColumnMap::default()
    };
    Ok(read_tsv_records(path, false, &columns)?
        .into_iter()
        .filter_map(|r| Some((r.reference?, r.candidate?)))
        .collect())
}

pub const PAIR_HEADER: [&str; 5] = ["reference", "candidate", "score", "source", "split"];

pub fn write_pairs<W: Write>(out: W, pairs: &[SentencePair], delimiter: u8) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .quote_style(if delimiter == b'\t' {
            csv::QuoteStyle::Never
        } else {
            csv::QuoteStyle::Necessary
        })
        .from_writer(out);
    w.write_record(PAIR_HEADER)?;
    for p in pairs {
        w.write_record([
            p.reference.as_str(),
            p.candidate.as_str(),
            &p.score.to_string(),
            p.source.as_str(),
            p.split.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_pairs_file(path: &Path, pairs: &[SentencePair]) -> Result<(), DatasetError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let file = File::create(path).map_err(io_err(path))?;
    write_pairs(std::io::BufWriter::new(file), pairs, b'\t').map_err(|e| read_err(path, e.to_string()))
}

/// Reads the pair TSV written by [`write_pairs`]. The source and split
/// columns are optional.
pub fn read_pairs(path: &Path) -> Result<Vec<SentencePair>, DatasetError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let line = line.trim_end_matches('\r');
        let fields: Vec<&str> = line.split('\t').collect();
        if line.trim().is_empty() || (i == 0 && fields.first() == Some(&"reference")) {
            continue;
        }
        if fields.len() < 3 {
            return Err(read_err(path, format!("line {}: expected at least 3 columns", i + 1)));
        }
        let score: f64 = fields[2]
            .trim()
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| read_err(path, format!("line {}: bad score {:?}", i + 1, fields[2])))?;
        let source = match fields.get(3) {
            Some(s) if !s.is_empty() => s.parse().map_err(|e: DatasetError| read_err(path, format!("line {}: {e}", i + 1)))?,
            _ => Source::Other,
        };
        let split = match fields.get(4) {
            Some(s) if !s.is_empty() => s.parse().map_err(|e: DatasetError| read_err(path, format!("line {}: {e}", i + 1)))?,
            _ => Split::Unassigned,
        };
        if fields[0].trim().is_empty() || fields[1].trim().is_empty() {
            return Err(read_err(path, format!("line {}: empty sentence", i + 1)));
        }
        out.push(SentencePair {
            reference: fields[0].to_string(),
            candidate: fields[1].to_string(),
            score,
            source,
            split,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.tsv");
        let mut pair = SentencePair::new("He said \"hi\".", "He didn't say \"hi\".", 0.0, Source::GlueDiag);
        pair.split = Split::Dev;
        let pairs = vec![pair, SentencePair::new("a", "b", 0.25, Source::Wmt)];
        write_pairs_file(&path, &pairs).unwrap();
        assert_eq!(read_pairs(&path).unwrap(), pairs);
    }

    #[test]
    fn tsv_columns_by_name_and_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nli.tsv");
        std::fs::write(&path, "premise\thypothesis\tlabel\nA b.\tA  c.\tcontradiction\n").unwrap();
        let cols = ColumnMap {
            reference: Some(ColumnRef::Name("premise".into())),
            candidate: Some(ColumnRef::Index(1)),
            label: Some(ColumnRef::Name("label".into())),
            score: None,
        };
        let recs = read_records(&path, InputFormat::Tsv, true, &cols).unwrap();
        assert_eq!(recs[0].candidate.as_deref(), Some("A c."));
        assert_eq!(recs[0].label.as_deref(), Some("contradiction"));
        let bad = ColumnMap {
            reference: Some(ColumnRef::Name("nope".into())),
            ..cols
        };
        assert!(read_records(&path, InputFormat::Tsv, true, &bad).is_err());
    }

    #[test]
    fn jsonl_numbers_become_text() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.jsonl");
        std::fs::write(&path, "{\"ref\":\"a\",\"mt\":\"b\",\"z\":0.5}\n\n{\"ref\":\"c\",\"mt\":\"d\",\"z\":\"x\"}\n").unwrap();
        let cols = ColumnMap {
            reference: Some(ColumnRef::Name("ref".into())),
            candidate: Some(ColumnRef::Name("mt".into())),
            score: Some(ColumnRef::Name("z".into())),
            label: None,
        };
        let recs = read_records(&path, InputFormat::Jsonl, false, &cols).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].score.as_deref(), Some("0.5"));
        assert_eq!(recs[1].score.as_deref(), Some("x"));
    }
}
