//! Reference metric adapter speaking the line-delimited JSON protocol.
//!
//! -> {"cmd":"ping"}                                   <- {"ok":true}
//! -> {"id":"7","reference":"...","candidate":"..."}   <- {"id":"7","score":0.42}
//!
//! `--shuffle N` answers in reverse order within windows of N requests.
//! `--fail-every N` answers every Nth request with an error record.

use std::io::{self, BufRead, Write};
use std::process::ExitCode;
use std::sync::mpsc::{self, RecvTimeoutError};
use std::time::Duration;

use clap::Parser;
use negforge::eval::{builtin_scorer, Scorer};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "negforge-adapter", version, about = "Metric adapter over stdin/stdout")]
struct Args {
    #[arg(long, default_value = "jaccard", value_parser = ["exact", "jaccard"])]
    metric: String,

    /// Buffer up to N requests and answer them in reverse order.
    #[arg(long, default_value_t = 1)]
    shuffle: usize,

    /// Answer every Nth request with an error record.
    #[arg(long)]
    fail_every: Option<usize>,
}

fn respond(line: &str, seen: &mut usize, args: &Args, scorer: &mut dyn Scorer) -> Value {
    let Ok(value) = serde_json::from_str::<Value>(line) else {
        return json!({"id": null, "error": "request is not JSON"});
    };
    if value.get("cmd").and_then(Value::as_str) == Some("ping") {
        return json!({"ok": true});
    }
    let id = value.get("id").cloned().unwrap_or(Value::Null);
    let (Some(reference), Some(candidate)) = (
        value.get("reference").and_then(Value::as_str),
        value.get("candidate").and_then(Value::as_str),
    ) else {
        return json!({"id": id, "error": "request needs string reference and candidate"});
    };
    *seen += 1;
    if args.fail_every.is_some_and(|n| n > 0 && (*seen).is_multiple_of(n)) {
        return json!({"id": id, "error": "injected failure"});
    }
    match scorer.score_batch(&[(reference, candidate)]) {
        Ok(scores) => match scores.into_iter().next() {
            Some(Ok(s)) => json!({"id": id, "score": s}),
            Some(Err(e)) => json!({"id": id, "error": e}),
            None => json!({"id": id, "error": "no score"}),
        },
        Err(e) => json!({"id": id, "error": e.to_string()}),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let Some(mut scorer) = builtin_scorer(&args.metric) else {
        eprintln!("unknown metric {}", args.metric);
        return ExitCode::from(1);
    };
    let (tx, rx) = mpsc::channel::<String>();
    std::thread::spawn(move || {
        for line in io::stdin().lock().lines() {
            let Ok(line) = line else { break };
            if tx.send(line).is_err() {
                break;
            }
        }
    });
    let stdout = io::stdout();
    let mut seen = 0usize;
    let mut buffer: Vec<Value> = Vec::new();
    let flush = |buffer: &mut Vec<Value>| -> io::Result<()> {
        let mut out = stdout.lock();
        for v in buffer.drain(..).rev() {
            writeln!(out, "{v}")?;
        }
        out.flush()
    };
    loop {
        let line = match rx.recv_timeout(Duration::from_millis(20)) {
            Ok(line) => line,
            Err(RecvTimeoutError::Timeout) => {
                if flush(&mut buffer).is_err() {
                    return ExitCode::from(3);
                }
                continue;
            }
            Err(RecvTimeoutError::Disconnected) => break,
        };
        if line.trim().is_empty() {
            continue;
        }
        buffer.push(respond(&line, &mut seen, &args, scorer.as_mut()));
        if buffer.len() >= args.shuffle.max(1) && flush(&mut buffer).is_err() {
            return ExitCode::from(3);
        }
    }
    if flush(&mut buffer).is_err() {
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
