//! Protocol conformance check for metric adapters.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::distributions::{Alphanumeric, DistString};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::scorer::{parse_response, ProcessScorer};
use super::EvalError;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub requests: usize,
    pub scored: usize,
    pub problems: Vec<String>,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty() && self.scored == self.requests
    }
}

const AWKWARD: [&str; 8] = ["\"quoted\"", "tab\there", "new\nline", "back\\slash", "caf\u{e9}", "\u{1f600}", "", "  "];

fn random_text(rng: &mut ChaCha8Rng) -> String {
    let words = rng.gen_range(0..8);
    let mut parts: Vec<String> = (0..words)
        .map(|_| {
            let len = rng.gen_range(1..9);
            Alphanumeric.sample_string(rng, len)
        })
        .collect();
    if rng.gen_bool(0.3) {
        parts.push(AWKWARD.choose(rng).copied().unwrap_or_default().to_string());
    }
    parts.join(" ")
}

/// Handshake, `requests` randomized requests sent in one burst (responses
/// may come back in any order), then one request missing its candidate,
/// which must produce an error record with the same id.
pub fn check_adapter(command: &str, requests: usize, seed: u64, timeout: Duration) -> Result<ConformanceReport, EvalError> {
    let mut adapter = ProcessScorer::spawn(command, timeout)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConformanceReport {
        requests,
        ..ConformanceReport::default()
    };
    let mut pending: HashSet<String> = HashSet::new();
    for i in 0..requests {
        let id = format!("c{i}");
        let line = json!({"id": id, "reference": random_text(&mut rng), "candidate": random_text(&mut rng)});
        adapter.send_raw(&line.to_string())?;
        pending.insert(id);
    }
    let bad_id = "malformed-1".to_string();
    adapter.send_raw(&json!({"id": bad_id, "reference": "only a reference"}).to_string())?;
    let mut saw_bad = false;

    let deadline = Instant::now() + timeout;
    while !pending.is_empty() || !saw_bad {
        let Some(line) = adapter.recv_until(deadline)? else {
            report.problems.push(format!("timed out with {} responses outstanding", pending.len() + usize::from(!saw_bad)));
            break;
        };
        if line.trim().is_empty() {
            continue;
        }
        match parse_response(&line) {
            Ok((id, _)) if id == bad_id => {
                saw_bad = true;
                if !line.contains("\"error\"") {
                    report.problems.push("malformed request was scored instead of rejected".into());
                }
            }
            Ok((id, score)) => {
                if !pending.remove(&id) {
                    report.problems.push(format!("unexpected or duplicate id {id:?}"));
                    continue;
                }
                match score {
                    Ok(_) => report.scored += 1,
                    Err(e) => report.problems.push(format!("id {id}: {e}")),
                }
            }
            Err(e) => report.problems.push(e),
        }
    }
    Ok(report)
}
