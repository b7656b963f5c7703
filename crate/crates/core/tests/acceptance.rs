//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use negforge::dataset::{
    attach_paraphrases, filter_pair, jaccard, split_dataset, swap_augment, whitespace_tokenize,
    FilterConfig, MissingPolicy, SentencePair, Source,
};
use negforge::eval::stats::spearman;
use negforge::eval::{sensitivity, CorpusItem, ExactMatch, PerturbOptions, PerturbationKind, SensitivityConfig};
use negforge::{is_negated, Analyzer, Branch, NegationEngine, NegatorOptions, ParserProvider, Resources};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Writes past libtest's capture so the lines show in a plain `cargo test`.
fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn check(name: &str, f: impl FnOnce() -> Result<(), String>) -> bool {
    let result = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(panic) => Err(panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    };
    match &result {
        Ok(()) => report(&format!("PASS {name}")),
        Err(why) => report(&format!("FAIL {name}: {why}")),
    }
    result.is_ok()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn engine(contractions: bool) -> NegationEngine {
    NegationEngine::new(ParserProvider::builtin(), NegatorOptions { prefer_contractions: contractions })
}

fn table2_goldens() -> Result<(), String> {
    let start = Instant::now();
    let rows = [
        ("I didn't know what to do.", "I knew what to do.", Branch::RemoveDo, true),
        ("I have never been to Paris.", "I have been to Paris.", Branch::RemoveCue, true),
        ("I enjoyed it so much.", "I did not enjoy it so much.", Branch::AddDo, false),
        ("I will be there.", "I won't be there.", Branch::NegateFirstAux, true),
        ("I'm very hungry.", "I'm not very hungry.", Branch::NegateRootAux, true),
    ];
    for (input, expected, branch, contractions) in rows {
        let out = engine(contractions).negate_text(input).map_err(|e| format!("{input}: {e}"))?;
        ensure(out.text == expected, || format!("{input} gave {:?}", out.text))?;
        ensure(out.branch == branch, || format!("{input} took branch {}", out.branch.number()))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))
}

fn figure1() -> Result<(), String> {
    let out = engine(true).negate_text("Ray Charles is legendary.").map_err(|e| e.to_string())?;
    ensure(out.text == "Ray Charles isn't legendary.", || out.text.clone())
}

fn polarity_toggle() -> Result<(), String> {
    let subjects = ["I", "You", "He", "She", "We", "They"];
    let modals = ["will", "can", "should", "would", "could", "must", "might", "may"];
    let verbs = [
        "see", "take", "make", "find", "know", "want", "like", "need", "give", "keep", "bring", "hold",
        "read", "write", "eat", "build", "watch", "visit", "carry", "use",
    ];
    let objects = ["it", "the book", "them"];
    let analyzer = Analyzer::default();
    let contractions = &Resources::bundled().contractions;
    let expand = |text: &str| -> String {
        text.split(' ')
            .map(|w| {
                let core = w.trim_end_matches('.');
                match contractions.expand(core) {
                    Some(full) => format!("{full}{}", &w[core.len()..]),
                    None => w.to_string(),
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut count = 0;
    for contract in [true, false] {
        let engine = engine(contract);
        for (i, subject) in subjects.iter().enumerate() {
            for (j, modal) in modals.iter().enumerate() {
                for (k, verb) in verbs.iter().enumerate() {
                    let s = format!("{subject} {modal} {verb} {}.", objects[(i + j + k) % objects.len()]);
                    let negated = engine.negate_text(&s).map_err(|e| format!("{s}: {e}"))?;
                    let parsed = analyzer.analyze(&negated.text).map_err(|e| format!("{}: {e}", negated.text))?;
                    ensure(is_negated(&parsed), || format!("{s} -> {} is not negated", negated.text))?;
                    let back = engine.negate_text(&negated.text).map_err(|e| format!("{}: {e}", negated.text))?;
                    ensure(expand(&back.text) == expand(&s), || format!("{s} -> {} -> {}", negated.text, back.text))?;
                    count += 1;
                }
            }
        }
    }
    ensure(count >= 200, || format!("only {count} sentences"))
}

/// Set semantics recomputed with sorted, deduplicated vectors.
fn oracle_jaccard(a: &str, b: &str) -> (usize, usize) {
    let sa: BTreeSet<&str> = a.split_whitespace().collect();
    let sb: BTreeSet<&str> = b.split_whitespace().collect();
    let inter = sa.iter().filter(|w| sb.contains(*w)).count();
    let mut union: Vec<&str> = a.split_whitespace().chain(b.split_whitespace()).collect();
    union.sort_unstable();
    union.dedup();
    (inter, union.len())
}

fn filter_oracle() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let vocab = ["the", "a", "cat", "dog", "is", "not", "sat", "ran", "on", "mat", "home", "."];
    let cfg = FilterConfig::default();
    let mut kept = 0;
    for i in 0..1000 {
        let sentence = |rng: &mut ChaCha8Rng| -> String {
            let n = rng.gen_range(1..12);
            (0..n).map(|_| vocab[rng.gen_range(0..vocab.len())]).collect::<Vec<_>>().join(" ")
        };
        let r = sentence(&mut rng);
        let c = if rng.gen_bool(0.5) {
            // near-duplicate so both outcomes are exercised
            let mut words: Vec<&str> = r.split(' ').collect();
            let edits = rng.gen_range(0..4);
            for _ in 0..edits {
                let pos = rng.gen_range(0..=words.len());
                words.insert(pos, vocab[rng.gen_range(0..vocab.len())]);
            }
            words.join(" ")
        } else {
            sentence(&mut rng)
        };
        let (inter, union) = oracle_jaccard(&r, &c);
        let expected_j = inter as f64 / union as f64;
        let got_j = jaccard(&whitespace_tokenize(&r), &whitespace_tokenize(&c));
        ensure((got_j - expected_j).abs() <= 1e-12, || format!("pair {i}: jaccard {got_j} vs {expected_j}"))?;
        let len_diff = r.split_whitespace().count().abs_diff(c.split_whitespace().count());
        // exact rational comparison against 0.55 = 11/20
        let expected_keep = inter * 20 >= union * 11 && len_diff < 4;
        let got = filter_pair(&SentencePair::new(r.clone(), c.clone(), 0.0, Source::Other), &cfg);
        ensure(got == expected_keep, || format!("pair {i}: {r:?} / {c:?} keep={got}"))?;
        kept += usize::from(got);
    }
    ensure(kept > 50 && kept < 950, || format!("degenerate sample: {kept} kept"))
}

fn pipeline_structure() -> Result<(), String> {
    let negated: Vec<SentencePair> = (0..37)
        .map(|i| SentencePair::new(format!("ref {i}"), format!("neg {i}"), 0.0, Source::Sentiment))
        .collect();
    let doubled = swap_augment(negated.clone());
    ensure(doubled.len() == 2 * negated.len(), || format!("swap gave {}", doubled.len()))?;
    let map: HashMap<String, String> = (0..37).map(|i| (format!("ref {i}"), format!("para {i}"))).collect();
    let (with_para, missing) = attach_paraphrases(negated, &map, MissingPolicy::Error).map_err(|e| e.to_string())?;
    ensure(missing == 0, || format!("{missing} missing"))?;
    let all = swap_augment(with_para);
    let zeros = all.iter().filter(|p| p.score == 0.0).count();
    let ones = all.iter().filter(|p| p.score == 1.0).count();
    ensure(zeros == ones && zeros == 74, || format!("{zeros} zeros vs {ones} ones"))?;
    for n in [10usize, 100, 1230] {
        let pairs: Vec<SentencePair> = (0..n)
            .map(|i| SentencePair::new(format!("r{i}"), format!("c{i}"), 0.5, Source::Other))
            .collect();
        let a = split_dataset(pairs.clone(), [80, 10, 10], 42).map_err(|e| e.to_string())?;
        let b = split_dataset(pairs.clone(), [80, 10, 10], 42).map_err(|e| e.to_string())?;
        ensure(
            (a.train.len(), a.dev.len(), a.test.len()) == (n * 8 / 10, n / 10, n / 10),
            || format!("{n}: {}/{}/{}", a.train.len(), a.dev.len(), a.test.len()),
        )?;
        ensure(a.train == b.train && a.dev == b.dev && a.test == b.test, || "seed not reproducible".into())?;
        let mut seen: Vec<String> = a.train.iter().chain(&a.dev).chain(&a.test).map(|p| p.reference.clone()).collect();
        let mut input: Vec<String> = pairs.iter().map(|p| p.reference.clone()).collect();
        seen.sort();
        input.sort();
        ensure(seen == input, || format!("{n}: not a partition"))?;
    }
    Ok(())
}

fn naive_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let below = v.iter().filter(|y| *y < x).count() as f64;
            let equal = v.iter().filter(|y| *y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

fn spearman_oracle() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..100 {
        let n = rng.gen_range(5..60);
        // values on a coarse grid so ties are frequent
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0..10) as f64 / 4.0).collect();
        let y: Vec<f64> = x.iter().map(|a| a + rng.gen_range(-2.0..2.0_f64).round()).collect();
        if x.iter().all(|a| *a == x[0]) || y.iter().all(|a| *a == y[0]) {
            continue;
        }
        let got = spearman(&x, &y).map_err(|e| e.to_string())?;
        let expected = naive_pearson(&naive_ranks(&x), &naive_ranks(&y));
        ensure((got - expected).abs() <= 1e-9, || format!("trial {trial}: {got} vs {expected}"))?;
        let fx: Vec<f64> = x.iter().map(|a| a.powi(3) * 2.0 + 7.0).collect();
        let gy: Vec<f64> = y.iter().map(|b| b.exp()).collect();
        let transformed = spearman(&fx, &gy).map_err(|e| e.to_string())?;
        ensure((transformed - got).abs() <= 1e-12, || format!("trial {trial}: {transformed} vs {got}"))?;
    }
    Ok(())
}

fn harness_self_test() -> Result<(), String> {
    let sentences = [
        "She can swim in the cold lake every morning.",
        "They will visit their old friends next summer.",
        "He is reading a long book about ancient history.",
        "We should take the early train to the city.",
    ];
    let corpus: Vec<CorpusItem> = sentences.iter().map(|s| CorpusItem::new(*s, *s)).collect();
    let cfg = SensitivityConfig {
        kinds: PerturbationKind::ALL.to_vec(),
        degrees: vec![1, 2, 3],
        seed: 11,
        ..SensitivityConfig::default()
    };
    let negator = engine(true);
    let opts = PerturbOptions {
        content_words_only: false,
        negator: Some(&negator),
    };
    let report = sensitivity(&mut ExactMatch, &corpus, &cfg, &opts).map_err(|e| e.to_string())?;
    ensure(report.skipped.is_empty(), || format!("skipped: {:?}", report.skipped))?;
    // negation only has degree 1
    ensure(report.cells.len() == 3 * 3 + 1, || format!("{} cells", report.cells.len()))?;
    for cell in &report.cells {
        ensure(cell.item_count == corpus.len(), || format!("{} {}: {} items", cell.kind, cell.degree, cell.item_count))?;
        ensure(cell.mean_raw_difference == 1.0, || {
            format!("{} {}: {}", cell.kind, cell.degree, cell.mean_raw_difference)
        })?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    report("");
    let results = [
        check("table2-goldens", table2_goldens),
        check("figure1-negation", figure1),
        check("polarity-toggle", polarity_toggle),
        check("filter-oracle", filter_oracle),
        check("pipeline-structure", pipeline_structure),
        check("spearman-oracle", spearman_oracle),
        check("harness-self-test", harness_self_test),
    ];
    report(
        "FAIL full-reconstruction: needs the upstream source datasets; run `cargo test --test acceptance -- --ignored` with NEGFORGE_RECONSTRUCTION_CONFIG set",
    );
    assert!(results.iter().all(|ok| *ok), "acceptance criteria failed");
}

/// Builds from the official sources named in a config file and checks the
/// published counts. Needs network-fetched data, so it is not run by default.
#[test]
#[ignore]
fn full_reconstruction() {
    use negforge::dataset::BuildConfig;
    use negforge::dataset::build_cannot_wmt;
    let ok = check("full-reconstruction", || {
        let path = std::env::var("NEGFORGE_RECONSTRUCTION_CONFIG")
            .map_err(|_| "NEGFORGE_RECONSTRUCTION_CONFIG is not set".to_string())?;
        let cfg = BuildConfig::load(std::path::Path::new(&path)).map_err(|e| e.to_string())?;
        let (_, report) = build_cannot_wmt(&cfg, &engine(true), &Analyzer::default()).map_err(|e| e.to_string())?;
        let count = |s: Source| report.sources.get(&s).map_or(0, |r| r.negated_pairs);
        let counts = [Source::NanNli, Source::WikiFactcheck, Source::GlueDiag, Source::Sentiment].map(count);
        ensure(counts == [117, 14_970, 154, 2_110], || format!("negated pairs {counts:?}"))?;
        let kept = report.wmt.as_ref().map_or(0, |w| w.kept);
        ensure(kept == 9_264, || format!("wmt kept {kept}"))?;
        ensure(report.test == 7_804, || format!("test {}", report.test))?;
        ensure(report.train == 62_435, || format!("train {}", report.train))
    });
    assert!(ok);
}
