//! `litcoref`: score, stratify and profile coreference corpora.
//!
//! Exit status is 0 on success, 1 on bad input (missing file, parse error,
//! mismatched documents, invalid flags) and 2 on internal failure. Every
//! failure prints one line `error: <kind>: <detail>` on stderr.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use litcoref::conll_io::{emit_report, read_corpus, CorpusSource, InputFormat, OutputFormat};
use litcoref::corpus::{
    align_documents, pathology_corpus, score_corpus, stratify_corpus, Averaging, DocPair,
};
use litcoref::corpus_stats::{compute_stats, StatsReport};
use litcoref::metrics::MetricId;
use litcoref::stratification::StratumConfig;
use litcoref::{Error, ModelError, Role};

#[derive(Parser, Debug)]
#[command(
    name = "litcoref",
    version,
    about = "Coreference evaluation for long narrative texts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score a response corpus against a key with every requested metric.
    Score(PairArgs),
    /// Score main characters, secondary characters and singletons separately.
    Stratify {
        #[command(flatten)]
        pair: PairArgs,
        /// Minimum chain size of a main character.
        #[arg(long, default_value_t = StratumConfig::DEFAULT_LONG_THRESHOLD)]
        long_threshold: usize,
        /// Require a named mention for a main character (default).
        #[arg(long, overrides_with = "no_require_named")]
        require_named: bool,
        /// Classify main characters by chain size alone.
        #[arg(long)]
        no_require_named: bool,
    },
    /// Corpus profile and rank-size fit of the key chains.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        /// Leave singletons out of the fitted rank-size series.
        #[arg(long)]
        exclude_singletons: bool,
        /// Also write the rank-size series as CSV to this file.
        #[arg(long, value_name = "PATH")]
        series_out: Option<PathBuf>,
    },
    /// Scores before and after removing response mentions absent from the key.
    Pathology(PairArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Key (gold) corpus.
    #[arg(long, value_name = "PATH")]
    key: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_name = "conll|jsonl")]
    format: Option<InputFormat>,
    /// Report format.
    #[arg(long, value_name = "table|json|csv", default_value = "table")]
    output: OutputFormat,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Response (system) corpus.
    #[arg(long, value_name = "PATH")]
    response: PathBuf,
    /// How per-document scores are combined.
    #[arg(long, value_name = "micro|macro", default_value = "micro")]
    averaging: Averaging,
    /// Comma-separated metrics (muc, b3, ceaf_m, ceaf_e, blanc, lea).
    #[arg(long, value_delimiter = ',', value_name = "M1,M2,...")]
    metrics: Vec<MetricId>,
}

impl PairArgs {
    fn metrics(&self) -> Vec<MetricId> {
        if self.metrics.is_empty() {
            MetricId::ALL.to_vec()
        } else {
            self.metrics.clone()
        }
    }

    fn load(&self) -> Result<Vec<DocPair>, Failure> {
        let key = load(&self.input.key, self.input.format, Role::Key)?;
        let response = load(&self.response, self.input.format, Role::Response)?;
        align_documents(key, response).map_err(Failure::from)
    }
}

/// A diagnostic kind, its message and the exit status it maps to.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    detail: String,
    status: u8,
}

impl Failure {
    fn input(kind: &'static str, detail: impl Into<String>) -> Self {
        Self {
            kind,
            detail: detail.into(),
            status: 1,
        }
    }

    fn internal(detail: impl Into<String>) -> Self {
        Self {
            kind: "internal",
            detail: detail.into(),
            status: 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let detail = e.to_string();
        match e {
            Error::Parse(_) => Failure::input("parse", detail),
            Error::Model(ModelError::DocMismatch { .. }) => Failure::input("doc_mismatch", detail),
            Error::Model(_) => Failure::input("invalid_partition", detail),
            Error::MissingDocument { .. } => Failure::input("missing_document", detail),
            Error::DuplicateDocument(_) => Failure::input("duplicate_document", detail),
            Error::Config(_) => Failure::input("config", detail),
            Error::Io(_) | Error::MissingMetric(_) | Error::EmptySeries => {
                Failure::internal(detail)
            }
        }
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Error::from(e).into()
    }
}

fn load(path: &Path, format: Option<InputFormat>, role: Role) -> Result<CorpusSource, Failure> {
    let shown = path.display();
    if !path.is_file() {
        return Err(Failure::input("file_not_found", shown.to_string()));
    }
    let format = format.unwrap_or_else(|| InputFormat::from_path(path));
    read_corpus(path, format, role).map_err(|e| match e {
        Error::Io(io) => Failure::input("io", format!("{shown}: {io}")),
        other => {
            let mut f = Failure::from(other);
            f.detail = format!("{shown}: {}", f.detail);
            f
        }
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Score(pair) => {
            let pairs = pair.load()?;
            let report = score_corpus(&pairs, &pair.metrics(), pair.averaging)?;
            Ok(emit_report(&report, pair.input.output))
        }
        Command::Stratify {
            pair,
            long_threshold,
            no_require_named,
            ..
        } => {
            let config = StratumConfig::new(long_threshold, !no_require_named)?;
            let pairs = pair.load()?;
            let (config, degraded) = config.degrade_for(pairs.iter().map(|p| &p.key));
            if degraded {
                eprintln!("warning: require_named disabled: no key mention is marked as named");
            }
            let report = stratify_corpus(&pairs, &config, &pair.metrics(), pair.averaging)?;
            Ok(emit_report(&report, pair.input.output))
        }
        Command::Stats {
            input,
            exclude_singletons,
            series_out,
        } => {
            let corpus = load(&input.key, input.format, Role::Key)?;
            let stats = compute_stats(corpus.documents.iter().map(|(d, p)| (d, p)));
            let report = StatsReport::new(stats, exclude_singletons);
            if let Some(path) = series_out {
                let mut csv = String::from("rank,size\n");
                for p in report.series() {
                    let _ = writeln!(csv, "{},{}", p.rank, p.size);
                }
                std::fs::write(&path, csv)
                    .map_err(|e| Failure::input("io", format!("{}: {e}", path.display())))?;
            }
            Ok(emit_report(&report, input.output))
        }
        Command::Pathology(pair) => {
            let pairs = pair.load()?;
            let report = pathology_corpus(&pairs, &pair.metrics(), pair.averaging)?;
            Ok(emit_report(&report, pair.input.output))
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            // clap's message up to the usage block
            let head: Vec<&str> = msg.lines().take_while(|l| !l.trim().is_empty()).collect();
            eprintln!(
                "error: usage: {}",
                one_line(head.join(" ").trim_start_matches("error:"))
            );
            return ExitCode::from(1);
        }
    };
    // a panic is reported as one diagnostic line below
    std::panic::set_hook(Box::new(|_| {}));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(out)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Ok(Err(f)) => {
            eprintln!("error: {}: {}", f.kind, one_line(&f.detail));
            ExitCode::from(f.status)
        }
        Err(_) => {
            eprintln!("error: internal: unexpected failure");
            ExitCode::from(2)
        }
    }
}
