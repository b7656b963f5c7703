use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const NEGFORGE: &str = env!("CARGO_BIN_EXE_negforge");
const ADAPTER: &str = env!("CARGO_BIN_EXE_negforge-adapter");

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(NEGFORGE)
        .args(args)
        .env_remove("NEGFORGE_LEXICON_DIR")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn negate_keeps_line_count_and_order() {
    let input = "Ray Charles is legendary.\nHe did not go.\n\nShe likes apples.\nWow !\n";
    for jobs in ["1", "3"] {
        let out = run(&["negate", "--jobs", jobs], input);
        assert_eq!(out.status.code(), Some(0));
        let lines: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "Ray Charles isn't legendary.");
        assert_eq!(lines[1], "He went.");
        assert!(lines[2].starts_with("ERROR:"));
        assert_eq!(lines[3], "She doesn't like apples.");
        assert!(lines[4].starts_with("ERROR:"));
    }
}

#[test]
fn negate_formats_and_contractions() {
    let out = run(&["negate", "--no-contractions", "--format", "tsv"], "She can swim.\n");
    assert_eq!(stdout(&out), "She can swim.\tShe can not swim.\t4\n");
    let out = run(&["negate", "--format", "csv"], "She can swim.\n");
    assert_eq!(stdout(&out), "She can swim.,She can't swim.,4\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["negate", "--bogus"], "").status.code(), Some(1));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
    assert_eq!(run(&["negate", "--parser", "conllu"], "x\n").status.code(), Some(1));
    assert_eq!(run(&["negate", "--strict"], "No verb here\n").status.code(), Some(2));
    assert_eq!(run(&["evaluate", "/nonexistent.tsv", "--metric", "exact"], "").status.code(), Some(2));
    let silent = run(&["check-adapter", "--metric-cmd", "cat > /dev/null", "--timeout-secs", "1"], "");
    assert_eq!(silent.status.code(), Some(3));
}

#[test]
fn conllu_parser_provider() {
    let dir = tempfile::tempdir().unwrap();
    let conllu = "# text = It works.\n\
        1\tIt\tit\tPRON\tPRP\t_\t2\tnsubj\t_\t_\n\
        2\tworks\twork\tVERB\tVBZ\t_\t0\troot\t_\tSpaceAfter=No\n\
        3\t.\t.\tPUNCT\t.\t_\t2\tpunct\t_\t_\n\n";
    let path = dir.path().join("fixture.conllu");
    std::fs::write(&path, conllu).unwrap();
    let out = run(
        &["negate", "--parser", "conllu", "--conllu-file", path.to_str().unwrap()],
        "It works.\nUnknown sentence.\n",
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "It doesn't work.");
    assert!(lines[1].starts_with("ERROR:"));
}

#[test]
fn external_parser_command() {
    // echoes the fixture parse regardless of input
    let dir = tempfile::tempdir().unwrap();
    let conllu = "1\tIt\tit\tPRON\tPRP\t_\t2\tnsubj\t_\t_\n\
        2\tworks\twork\tVERB\tVBZ\t_\t0\troot\t_\tSpaceAfter=No\n\
        3\t.\t.\tPUNCT\t.\t_\t2\tpunct\t_\t_\n\n";
    let path = dir.path().join("out.conllu");
    std::fs::write(&path, conllu).unwrap();
    let cmd = format!("cat > /dev/null; cat {}", path.display());
    let out = run(&["negate", "--parser", "external-cmd", "--external-parser-cmd", &cmd], "It works.\n");
    assert_eq!(stdout(&out), "It doesn't work.\n");
}

#[test]
fn adapter_passes_conformance_even_shuffled() {
    for extra in ["", " --shuffle 7", " --metric exact --shuffle 100"] {
        let cmd = format!("{ADAPTER}{extra}");
        let out = run(&["check-adapter", "--metric-cmd", &cmd, "--requests", "250"], "");
        assert_eq!(out.status.code(), Some(0), "{extra}: {}", stdout(&out));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["scored"], 250);
    }
    let cmd = format!("{ADAPTER} --fail-every 5");
    let out = run(&["check-adapter", "--metric-cmd", &cmd, "--requests", "20"], "");
    assert_eq!(out.status.code(), Some(3));
}

fn write_pairs(path: &Path, rows: &[(&str, &str, f64)]) {
    let mut text = String::from("reference\tcandidate\tscore\n");
    for (r, c, s) in rows {
        text.push_str(&format!("{r}\t{c}\t{s}\n"));
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn evaluate_with_builtin_and_adapter_agree() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("test.tsv");
    write_pairs(
        &data,
        &[
            ("a b c d", "a b c d", 1.0),
            ("a b c d", "a b c x", 0.7),
            ("a b c d", "a b x y", 0.4),
            ("a b c d", "a x y z", 0.2),
            ("a b c d", "w x y z", 0.0),
        ],
    );
    let builtin = run(&["evaluate", data.to_str().unwrap(), "--metric", "jaccard"], "");
    assert_eq!(builtin.status.code(), Some(0));
    assert_eq!(stdout(&builtin), "spearman\t1\n");
    let cmd = format!("{ADAPTER} --metric jaccard");
    let adapter = run(&["evaluate", data.to_str().unwrap(), "--metric-cmd", &cmd, "--jobs", "2"], "");
    assert_eq!(stdout(&adapter), stdout(&builtin));
}

#[test]
fn split_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("all.tsv");
    let rows: Vec<(String, String, f64)> = (0..50).map(|i| (format!("r{i}"), format!("c{i}"), 0.5)).collect();
    let refs: Vec<(&str, &str, f64)> = rows.iter().map(|(a, b, s)| (a.as_str(), b.as_str(), *s)).collect();
    write_pairs(&data, &refs);
    let out_dir = dir.path().join("out");
    std::fs::create_dir(&out_dir).unwrap();
    let out = run(
        &["split", data.to_str().unwrap(), "--output", out_dir.to_str().unwrap(), "--seed", "4"],
        "",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let count = |n: &str| std::fs::read_to_string(out_dir.join(n)).unwrap().lines().count() - 1;
    assert_eq!((count("train.tsv"), count("dev.tsv"), count("test.tsv")), (40, 5, 5));
    let bad = run(&["split", data.to_str().unwrap(), "--ratios", "50,10,10"], "");
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sensitivity_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    std::fs::write(
        &corpus,
        "She can swim in the lake.\tShe can swim in the lake.\t1\n\
         The dog ran home quickly.\tThe dog ran home.\t0.8\n\
         Ray Charles is legendary.\tRay Charles is famous.\t0.5\n",
    )
    .unwrap();
    let c = corpus.to_str().unwrap();
    let args = ["sensitivity", c, "--metric", "jaccard", "--degrees", "1,2", "--seed", "9"];
    let a = run(&args, "");
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let text = stdout(&a);
    assert!(text.starts_with("kind,degree,"));
    // three kinds at two degrees plus negation at degree 1
    assert_eq!(text.lines().count(), 1 + 7);
    let cmd = format!("{ADAPTER} --metric jaccard --shuffle 3");
    let mut sharded: Vec<&str> = args.to_vec();
    sharded.splice(2..4, ["--metric-cmd", cmd.as_str(), "--jobs", "2"]);
    let b = run(&sharded, "");
    assert_eq!(stdout(&b), text);
}

#[test]
fn build_dataset_writes_splits_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("sentiment.tsv"), "I will be there.\nShe can swim.\nHe is tall.\nThey were late.\n").unwrap();
    std::fs::write(d.join("wmt.tsv"), "ref\tmt\tscore\na b\ta c\t0.5\nc d\tc e\t0.1\n").unwrap();
    std::fs::write(
        d.join("build.toml"),
        "[[sources]]\nname = \"sentiment\"\npath = \"sentiment.tsv\"\nhas_header = false\nmode = \"negate\"\n\
         columns = { reference = 0 }\n\n[wmt]\npath = \"wmt.tsv\"\n\
         columns = { reference = \"ref\", candidate = \"mt\", score = \"score\" }\n",
    )
    .unwrap();
    let out_dir = d.join("dataset");
    let out = run(
        &[
            "build-dataset",
            "--config",
            d.join("build.toml").to_str().unwrap(),
            "--output",
            out_dir.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: usize = ["train.tsv", "dev.tsv", "test.tsv"]
        .iter()
        .map(|n| std::fs::read_to_string(out_dir.join(n)).unwrap().lines().count() - 1)
        .sum();
    // four negated pairs, doubled by swapping, plus two WMT pairs
    assert_eq!(lines, 4 * 2 + 2);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["train"].as_u64().unwrap() + report["dev"].as_u64().unwrap() + report["test"].as_u64().unwrap(), 10);
}
