//! Metric scorers: built-in string metrics and external adapter processes
//! speaking the line-delimited JSON protocol.
//!
//! ```text
//! -> {"cmd":"ping"}
//! <- {"ok":true}
//! -> {"id":"7","reference":"...","candidate":"..."}
//! <- {"id":"7","score":0.42}        or {"id":"7","error":"..."}
//! ```

use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use super::EvalError;
use crate::dataset::{jaccard, whitespace_tokenize};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);
pub const DEFAULT_BATCH_SIZE: usize = 64;

/// Result of scoring one pair: a finite score or a per-item error.
pub type ItemScore = Result<f64, String>;

pub trait Scorer: Send {
    fn name(&self) -> &str;

    /// One entry per input pair, in input order. `Err` aborts the run.
    fn score_batch(&mut self, pairs: &[(&str, &str)]) -> Result<Vec<ItemScore>, EvalError>;
}

/// Scores all pairs batch by batch and fails once the share of per-item
/// errors exceeds `max_error_fraction`.
pub fn score_pairs(
    scorer: &mut dyn Scorer,
    pairs: &[(&str, &str)],
    batch_size: usize,
    max_error_fraction: f64,
) -> Result<Vec<ItemScore>, EvalError> {
    let mut out = Vec::with_capacity(pairs.len());
    for chunk in pairs.chunks(batch_size.max(1)) {
        out.extend(scorer.score_batch(chunk)?);
    }
    let failed = out.iter().filter(|s| s.is_err()).count();
    if !pairs.is_empty() && failed as f64 / pairs.len() as f64 > max_error_fraction {
        let first = out.iter().find_map(|s| s.as_ref().err()).cloned().unwrap_or_default();
        return Err(EvalError::TooManyErrors {
            failed,
            total: pairs.len(),
            first,
        });
    }
    Ok(out)
}

/// 1 for identical strings, else 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactMatch;

impl Scorer for ExactMatch {
    fn name(&self) -> &str {
        "exact"
    }

    fn score_batch(&mut self, pairs: &[(&str, &str)]) -> Result<Vec<ItemScore>, EvalError> {
        Ok(pairs.iter().map(|(r, c)| Ok(if r == c { 1.0 } else { 0.0 })).collect())
    }
}

/// Jaccard similarity of whitespace word sets.
#[derive(Debug, Clone, Copy, Default)]
pub struct JaccardScorer;

impl Scorer for JaccardScorer {
    fn name(&self) -> &str {
        "jaccard"
    }

    fn score_batch(&mut self, pairs: &[(&str, &str)]) -> Result<Vec<ItemScore>, EvalError> {
        Ok(pairs
            .iter()
            .map(|(r, c)| Ok(jaccard(&whitespace_tokenize(r), &whitespace_tokenize(c))))
            .collect())
    }
}

/// Wraps a closure as a scorer.
pub struct FnScorer<F> {
    name: String,
    f: F,
}

impl<F: FnMut(&str, &str) -> ItemScore + Send> FnScorer<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnScorer { name: name.into(), f }
    }
}

impl<F: FnMut(&str, &str) -> ItemScore + Send> Scorer for FnScorer<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn score_batch(&mut self, pairs: &[(&str, &str)]) -> Result<Vec<ItemScore>, EvalError> {
        Ok(pairs.iter().map(|(r, c)| (self.f)(r, c)).collect())
    }
}

/// Built-in scorer by name: "exact" or "jaccard".
pub fn builtin_scorer(name: &str) -> Option<Box<dyn Scorer>> {
    match name {
        "exact" => Some(Box::new(ExactMatch)),
        "jaccard" => Some(Box::new(JaccardScorer)),
        _ => None,
    }
}

/// An adapter process started with `sh -c <command>`.
pub struct ProcessScorer {
    command: String,
    child: Child,
    stdin: BufWriter<ChildStdin>,
    lines: Receiver<String>,
    timeout: Duration,
    next_id: u64,
}

impl ProcessScorer {
    /// Starts the adapter and completes the handshake.
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self, EvalError> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| EvalError::Adapter(format!("cannot start `{command}`: {e}")))?;
        let stdout = child.stdout.take().expect("piped stdout");
        let stdin = BufWriter::new(child.stdin.take().expect("piped stdin"));
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let Ok(line) = line else { break };
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut scorer = ProcessScorer {
            command: command.to_string(),
            child,
            stdin,
            lines: rx,
            timeout,
            next_id: 0,
        };
        scorer.handshake()?;
        Ok(scorer)
    }

    fn send(&mut self, value: &Value) -> Result<(), EvalError> {
        let write = writeln!(self.stdin, "{value}").and_then(|_| self.stdin.flush());
        write.map_err(|e| EvalError::Adapter(format!("`{}`: write failed: {e}", self.command)))
    }

    /// Sends a raw line, bypassing request construction.
    pub fn send_raw(&mut self, line: &str) -> Result<(), EvalError> {
        let write = writeln!(self.stdin, "{line}").and_then(|_| self.stdin.flush());
        write.map_err(|e| EvalError::Adapter(format!("`{}`: write failed: {e}", self.command)))
    }

    /// Next output line, or `None` after `deadline` or when the adapter
    /// closes its output.
    pub fn recv_until(&self, deadline: Instant) -> Result<Option<String>, EvalError> {
        let remaining = deadline.saturating_duration_since(Instant::now());
        match self.lines.recv_timeout(remaining) {
            Ok(line) => Ok(Some(line)),
            Err(RecvTimeoutError::Timeout) => Ok(None),
            Err(RecvTimeoutError::Disconnected) => Err(EvalError::Adapter(format!(
                "`{}` closed its output",
                self.command
            ))),
        }
    }

    fn handshake(&mut self) -> Result<(), EvalError> {
        self.send(&json!({"cmd": "ping"}))?;
        let deadline = Instant::now() + self.timeout;
        loop {
            let Some(line) = self.recv_until(deadline)? else {
                return Err(EvalError::Adapter(format!("`{}`: no handshake reply", self.command)));
            };
            if line.trim().is_empty() {
                continue;
            }
            let reply: Value = serde_json::from_str(&line)
                .map_err(|_| EvalError::Adapter(format!("`{}`: bad handshake reply {line:?}", self.command)))?;
            return if reply.get("ok") == Some(&Value::Bool(true)) {
                Ok(())
            } else {
                Err(EvalError::Adapter(format!("`{}`: bad handshake reply {line:?}", self.command)))
            };
        }
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }
}

/// Interprets one response line as (id, item result).
pub fn parse_response(line: &str) -> Result<(String, ItemScore), String> {
    let value: Value = serde_json::from_str(line).map_err(|e| format!("malformed response {line:?}: {e}"))?;
    let id = match value.get("id") {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) => n.to_string(),
        _ => return Err(format!("response without id: {line:?}")),
    };
    if let Some(err) = value.get("error") {
        let msg = err.as_str().map(str::to_string).unwrap_or_else(|| err.to_string());
        return Ok((id, Err(format!("adapter error: {msg}"))));
    }
    let score = match value.get("score").and_then(Value::as_f64) {
        Some(s) if s.is_finite() => Ok(s),
        Some(_) => Err("non-finite score".to_string()),
        None => Err(format!("response without numeric score: {line:?}")),
    };
    Ok((id, score))
}

impl Scorer for ProcessScorer {
    fn name(&self) -> &str {
        &self.command
    }

    fn score_batch(&mut self, pairs: &[(&str, &str)]) -> Result<Vec<ItemScore>, EvalError> {
        let mut pending: HashMap<String, usize> = HashMap::with_capacity(pairs.len());
        for (i, (reference, candidate)) in pairs.iter().enumerate() {
            let id = self.next_id.to_string();
            self.next_id += 1;
            self.send(&json!({"id": id, "reference": reference, "candidate": candidate}))?;
            pending.insert(id, i);
        }
        let mut results: Vec<Option<ItemScore>> = vec![None; pairs.len()];
        let deadline = Instant::now() + self.timeout;
        while !pending.is_empty() {
            let Some(line) = self.recv_until(deadline)? else {
                log::warn!("`{}`: {} responses timed out", self.command, pending.len());
                break;
            };
            if line.trim().is_empty() {
                continue;
            }
            match parse_response(&line) {
                Ok((id, score)) => match pending.remove(&id) {
                    Some(i) => results[i] = Some(score),
                    None => log::warn!("`{}`: response for unknown id {id:?}", self.command),
                },
                Err(e) => log::warn!("`{}`: {e}", self.command),
            }
        }
        Ok(results
            .into_iter()
            .map(|r| r.unwrap_or_else(|| Err("timed out waiting for response".to_string())))
            .collect())
    }
}

impl Drop for ProcessScorer {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
