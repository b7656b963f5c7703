use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use negforge::dataset::io::{read_pairs, write_pairs_file};
use negforge::dataset::{build_cannot_wmt, split_dataset, BuildConfig, SentencePair, DEFAULT_RATIOS};
use negforge::eval::scorer::{score_pairs, ItemScore, DEFAULT_BATCH_SIZE};
use negforge::eval::{
    aggregate, builtin_scorer, check_adapter, collect_sensitivity, spearman, write_sensitivity_csv, CorpusItem,
    EvalError, PerturbOptions, PerturbationKind, ProcessScorer, Scorer, SensitivityConfig, SensitivityData,
};
use negforge::{Analyzer, NegateTextError, NegationEngine, NegatorOptions, ParserProvider, Resources};

#[derive(Parser, Debug)]
#[command(name = "negforge", version, about = "Rule-based sentence negation and metric negation probing")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Where dependency parses come from.
    #[arg(long, value_enum, default_value_t = ParserKind::Builtin, global = true)]
    parser: ParserKind,

    /// CoNLL-U file with parses for `--parser conllu`.
    #[arg(long, global = true)]
    conllu_file: Option<PathBuf>,

    /// Command for `--parser external-cmd`: sentences on stdin, CoNLL-U on stdout.
    #[arg(long, global = true)]
    external_parser_cmd: Option<String>,

    /// Prefer contracted negation ("won't"). On by default.
    #[arg(long, global = true, overrides_with = "no_contractions")]
    prefer_contractions: bool,

    /// Use full forms ("will not").
    #[arg(long, global = true)]
    no_contractions: bool,

    /// Seed for shuffling and perturbations (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Parallel workers or adapter processes.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,

    /// Output file or directory; stdout when omitted.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Abort on the first per-item failure.
    #[arg(long, global = true)]
    strict: bool,

    /// Log more (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ParserKind {
    Builtin,
    Conllu,
    ExternalCmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Csv,
}

#[derive(Args, Debug)]
struct MetricArgs {
    /// Adapter command speaking the line-delimited JSON protocol.
    #[arg(long, conflicts_with = "metric")]
    metric_cmd: Option<String>,

    /// Built-in metric instead of an adapter.
    #[arg(long, value_parser = ["exact", "jaccard"])]
    metric: Option<String>,

    /// Seconds to wait for one batch of responses.
    #[arg(long, default_value_t = 60)]
    timeout_secs: u64,

    #[arg(long, default_value_t = DEFAULT_BATCH_SIZE)]
    batch_size: usize,

    /// Largest tolerated share of pairs the metric fails to score.
    #[arg(long, default_value_t = 0.0)]
    max_error_fraction: f64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Toggle the polarity of each input line.
    Negate {
        /// Input file, one sentence per line (stdin when omitted).
        input: Option<PathBuf>,
    },
    /// Build the negation dataset merged with WMT judgements.
    BuildDataset {
        #[arg(long)]
        config: PathBuf,
    },
    /// Split a pair TSV into train/dev/test files.
    Split {
        input: PathBuf,
        /// Train, dev and test percentages.
        #[arg(long, value_delimiter = ',', num_args = 3, default_values_t = DEFAULT_RATIOS)]
        ratios: Vec<u32>,
    },
    /// Spearman correlation between metric scores and gold scores.
    Evaluate {
        /// Pair TSV with gold scores in the third column.
        dataset: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
    },
    /// Score drops under graded perturbations.
    Sensitivity {
        /// TSV of reference, candidate and an optional gold score.
        corpus: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        /// Perturbation kinds (all when omitted).
        #[arg(long, value_delimiter = ',')]
        perturbation: Vec<PerturbationKind>,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3])]
        degrees: Vec<usize>,
        /// Drop only content words for word_drop.
        #[arg(long)]
        content_words_only: bool,
        /// Also write a JSON summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Run the protocol conformance check against an adapter.
    CheckAdapter {
        #[arg(long)]
        metric_cmd: String,
        #[arg(long, default_value_t = 1000)]
        requests: usize,
        #[arg(long, default_value_t = 60)]
        timeout_secs: u64,
    },
}

/// Failure classes with their exit statuses.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
    Adapter(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Adapter(_) => 3,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Adapter(_) | EvalError::TooManyErrors { .. } => Failure::Adapter(e.into()),
            EvalError::InvalidArgument(_) => Failure::Usage(e.into()),
            EvalError::PerturbationFailed(_) => Failure::Data(e.into()),
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow!("{msg}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(e) | Failure::Data(e) | Failure::Adapter(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Cmd::Negate { input } => negate(g, input.as_deref()),
        Cmd::BuildDataset { config } => build_dataset(g, config),
        Cmd::Split { input, ratios } => split(g, input, ratios),
        Cmd::Evaluate { dataset, metric } => evaluate(g, dataset, metric),
        Cmd::Sensitivity {
            corpus,
            metric,
            perturbation,
            degrees,
            content_words_only,
            summary,
        } => {
            let cfg = SensitivityConfig {
                kinds: if perturbation.is_empty() {
                    PerturbationKind::ALL.to_vec()
                } else {
                    perturbation.clone()
                },
                degrees: degrees.clone(),
                seed: g.seed.unwrap_or(0),
                content_words_only: *content_words_only,
                batch_size: metric.batch_size,
                max_error_fraction: metric.max_error_fraction,
            };
            sensitivity(g, corpus, metric, &cfg, summary.as_deref())
        }
        Cmd::CheckAdapter {
            metric_cmd,
            requests,
            timeout_secs,
        } => {
            let report = check_adapter(metric_cmd, *requests, g.seed.unwrap_or(0), Duration::from_secs(*timeout_secs))?;
            let mut out = output(g.output.as_deref())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report).context("serializing report")?)
                .context("writing report")?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Adapter(anyhow!(
                    "adapter failed conformance: {}",
                    report.problems.first().map(String::as_str).unwrap_or("missing responses")
                )))
            }
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn engine(g: &Global) -> Result<NegationEngine, Failure> {
    let resources = Resources::from_env().context("loading lexicons")?;
    let provider = match g.parser {
        ParserKind::Builtin => ParserProvider::Builtin(Analyzer::new(Arc::clone(&resources))),
        ParserKind::Conllu => {
            let path = g.conllu_file.as_ref().ok_or_else(|| usage("--parser conllu needs --conllu-file"))?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ParserProvider::from_conllu_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        ParserKind::ExternalCmd => ParserProvider::ExternalCommand(
            g.external_parser_cmd
                .clone()
                .ok_or_else(|| usage("--parser external-cmd needs --external-parser-cmd"))?,
        ),
    };
    let options = NegatorOptions {
        prefer_contractions: !g.no_contractions || g.prefer_contractions,
    };
    Ok(NegationEngine::with_resources(provider, options, resources))
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        }
        None => {
            io::stdin().read_to_string(&mut text).context("reading stdin")?;
        }
    }
    Ok(text)
}

fn shards<T>(items: &[T], jobs: u32) -> Vec<(usize, &[T])> {
    let size = items.len().div_ceil(jobs as usize).max(1);
    items.chunks(size).enumerate().map(|(i, c)| (i * size, c)).collect()
}

fn negate(g: &Global, input: Option<&Path>) -> Result<(), Failure> {
    let engine = engine(g)?;
    let text = read_input(input)?;
    let lines: Vec<&str> = text.lines().collect();
    let results: Vec<Result<_, NegateTextError>> = shards(&lines, g.jobs)
        .into_par_iter()
        .flat_map_iter(|(_, chunk)| engine.negate_batch(chunk))
        .collect();
    let failed = results.iter().filter(|r| r.is_err()).count();
    if g.strict {
        if let Some((i, Err(e))) = results.iter().enumerate().find(|(_, r)| r.is_err()) {
            return Err(Failure::Data(anyhow!("line {}: {e}", i + 1)));
        }
    }
    let mut out = output(g.output.as_deref())?;
    for (line, result) in lines.iter().zip(&results) {
        let (text, branch) = match result {
            Ok(o) => (o.text.clone(), o.branch.number().to_string()),
            Err(e) => (format!("ERROR:{e}"), String::new()),
        };
        match g.format {
            None => writeln!(out, "{text}"),
            Some(Format::Tsv) => writeln!(out, "{line}\t{text}\t{branch}"),
            Some(Format::Csv) => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
                w.write_record([*line, text.as_str(), branch.as_str()]).context("formatting csv")?;
                let bytes = w.into_inner().map_err(|e| anyhow!("formatting csv: {e}"))?;
                out.write_all(&bytes)
            }
        }
        .context("writing output")?;
    }
    out.flush().context("writing output")?;
    if failed > 0 {
        log::warn!("{failed} of {} lines could not be negated", lines.len());
    }
    Ok(())
}

fn build_dataset(g: &Global, config: &Path) -> Result<(), Failure> {
    let mut cfg = BuildConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    let dir = g.output.clone().unwrap_or_else(|| PathBuf::from("dataset"));
    let engine = engine(g)?;
    let analyzer = Analyzer::new(Resources::from_env().context("loading lexicons")?);
    let (bundle, report) = build_cannot_wmt(&cfg, &engine, &analyzer)?;
    bundle.write(&dir)?;
    let json = serde_json::to_string_pretty(&report).context("serializing report")?;
    std::fs::write(dir.join("report.json"), json + "\n").context("writing report.json")?;
    eprintln!(
        "train {} / dev {} / test {} pairs written to {}",
        report.train,
        report.dev,
        report.test,
        dir.display()
    );
    Ok(())
}

fn split(g: &Global, input: &Path, ratios: &[u32]) -> Result<(), Failure> {
    let ratios: [u32; 3] = ratios.try_into().map_err(|_| usage("--ratios takes three values"))?;
    if ratios.iter().sum::<u32>() != 100 {
        return Err(usage(format!("--ratios must sum to 100, got {ratios:?}")));
    }
    let pairs = read_pairs(input)?;
    let s = split_dataset(pairs, ratios, g.seed.unwrap_or(0))?;
    let dir = g.output.clone().unwrap_or_else(|| PathBuf::from("."));
    for (name, part) in [("train", &s.train), ("dev", &s.dev), ("test", &s.test)] {
        write_pairs_file(&dir.join(format!("{name}.tsv")), part)?;
    }
    eprintln!("train {} / dev {} / test {}", s.train.len(), s.dev.len(), s.test.len());
    Ok(())
}

fn make_scorer(m: &MetricArgs) -> Result<Box<dyn Scorer>, Failure> {
    match (&m.metric_cmd, &m.metric) {
        (Some(cmd), _) => Ok(Box::new(ProcessScorer::spawn(cmd, Duration::from_secs(m.timeout_secs))?)),
        (None, Some(name)) => builtin_scorer(name).ok_or_else(|| usage(format!("unknown metric {name}"))),
        (None, None) => Err(usage("give --metric-cmd or --metric")),
    }
}

/// Scores `pairs` with one scorer per shard.
fn score_sharded(m: &MetricArgs, pairs: &[(&str, &str)], jobs: u32) -> Result<Vec<ItemScore>, Failure> {
    let parts: Vec<Result<Vec<ItemScore>, Failure>> = shards(pairs, jobs)
        .into_par_iter()
        .map(|(_, chunk)| {
            let mut scorer = make_scorer(m)?;
            Ok(score_pairs(scorer.as_mut(), chunk, m.batch_size, 1.0)?)
        })
        .collect();
    let mut out = Vec::with_capacity(pairs.len());
    for p in parts {
        out.extend(p?);
    }
    let failed = out.iter().filter(|s| s.is_err()).count();
    if !out.is_empty() && failed as f64 / out.len() as f64 > m.max_error_fraction {
        return Err(EvalError::TooManyErrors {
            failed,
            total: out.len(),
            first: out.iter().find_map(|s| s.as_ref().err()).cloned().unwrap_or_default(),
        }
        .into());
    }
    Ok(out)
}

fn evaluate(g: &Global, dataset: &Path, m: &MetricArgs) -> Result<(), Failure> {
    let pairs: Vec<SentencePair> = read_pairs(dataset)?;
    let requests: Vec<(&str, &str)> = pairs.iter().map(|p| (p.reference.as_str(), p.candidate.as_str())).collect();
    let scores = score_sharded(m, &requests, g.jobs)?;
    let (metric, gold): (Vec<f64>, Vec<f64>) = scores
        .iter()
        .zip(&pairs)
        .filter_map(|(s, p)| s.as_ref().ok().map(|s| (*s, p.score)))
        .unzip();
    let rho = spearman(&metric, &gold).map_err(|e| Failure::Data(e.into()))?;
    let mut out = output(g.output.as_deref())?;
    writeln!(out, "spearman\t{rho}").context("writing output")?;
    out.flush().context("writing output")?;
    Ok(())
}

fn read_corpus(path: &Path) -> Result<Vec<CorpusItem>, Failure> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut items = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
        if line.trim().is_empty() || (i == 0 && fields[0] == "reference") {
            continue;
        }
        if fields.len() < 2 {
            bail_data(format!("{}:{}: expected reference<TAB>candidate", path.display(), i + 1))?;
        }
        let label = match fields.get(2).map(|s| s.trim()) {
            None | Some("") => None,
            Some(s) => Some(s.parse::<f64>().map_err(|_| {
                Failure::Data(anyhow!("{}:{}: bad score {s:?}", path.display(), i + 1))
            })?),
        };
        items.push(CorpusItem {
            reference: fields[0].to_string(),
            candidate: fields[1].to_string(),
            label,
        });
    }
    if items.is_empty() {
        bail_data(format!("{}: empty corpus", path.display()))?;
    }
    Ok(items)
}

fn bail_data(msg: String) -> Result<(), Failure> {
    Err(Failure::Data(anyhow!(msg)))
}

fn sensitivity(
    g: &Global,
    corpus: &Path,
    m: &MetricArgs,
    cfg: &SensitivityConfig,
    summary: Option<&Path>,
) -> Result<(), Failure> {
    cfg.validate()?;
    if m.metric_cmd.is_none() && m.metric.is_none() {
        return Err(usage("give --metric-cmd or --metric"));
    }
    let items = read_corpus(corpus)?;
    let engine = engine(g)?;
    let options = PerturbOptions {
        content_words_only: cfg.content_words_only,
        negator: Some(&engine),
    };
    let parts: Vec<Result<SensitivityData, Failure>> = shards(&items, g.jobs)
        .into_par_iter()
        .map(|(offset, chunk)| {
            let mut scorer = make_scorer(m)?;
            Ok(collect_sensitivity(scorer.as_mut(), chunk, offset, cfg, &options)?)
        })
        .collect();
    let mut data = SensitivityData::default();
    for p in parts {
        data.merge(p?);
    }
    if g.strict && !data.skipped.is_empty() {
        return Err(Failure::Data(anyhow!("{}", data.skipped[0])));
    }
    let report = aggregate(&data);
    let mut out = output(g.output.as_deref())?;
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => write_sensitivity_csv(&mut out, &report).context("writing report")?,
        Format::Tsv => {
            writeln!(out, "kind\tdegree\titem_count\tmean_raw_difference\tnormalized_score").context("writing report")?;
            for c in &report.cells {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    c.kind, c.degree, c.item_count, c.mean_raw_difference, c.normalized_score
                )
                .context("writing report")?;
            }
        }
    }
    out.flush().context("writing report")?;
    if let Some(path) = summary {
        let json = serde_json::to_string_pretty(&report).context("serializing summary")?;
        std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    if !report.skipped.is_empty() {
        log::warn!("{} perturbed items skipped", report.skipped.len());
    }
    Ok(())
}

impl From<negforge::dataset::DatasetError> for Failure {
    fn from(e: negforge::dataset::DatasetError) -> Self {
        Failure::Data(e.into())
    }
}
