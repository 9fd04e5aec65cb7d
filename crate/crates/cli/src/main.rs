use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use textaug::pipeline::parse_config;
use textaug::{run_corpus, validate, CorpusFormat, Document, ResourceStore};

/// Structured text augmentation over CoNLL-U and JSONL corpora.
#[derive(Parser, Debug)]
#[command(name = "textaug", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a pipeline over a corpus.
    Augment(AugmentArgs),
    /// Check every document against the document invariants.
    Validate(InputArgs),
    /// Print document, sentence, token and entity counts.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults from the input file extension.
    #[arg(long, value_name = "conllu|jsonl")]
    input_format: Option<CorpusFormat>,
}

#[derive(Args, Debug)]
struct AugmentArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Pipeline configuration (JSON).
    #[arg(long)]
    pipeline: PathBuf,
    /// Written atomically; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Defaults to the input format.
    #[arg(long, value_name = "conllu|jsonl")]
    output_format: Option<CorpusFormat>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory holding resource files named by id.
    #[arg(long, value_name = "DIR")]
    resources: Option<PathBuf>,
    /// Where to write run statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A failed command: exit status and the message for standard error.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            status: 1,
            message: message.into(),
        }
    }

    fn resource(message: impl Into<String>) -> Self {
        Failure {
            status: 2,
            message: message.into(),
        }
    }
}

impl From<textaug::Error> for Failure {
    fn from(err: textaug::Error) -> Self {
        let message = format!("{}: {}", err.code(), err);
        if err.is_resource_error() {
            Failure::resource(message)
        } else {
            Failure::input(message)
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Augment(args) => cmd_augment(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::Stats(args) => cmd_stats(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.status)
        }
    }
}

fn read_text(path: &Path, what: &str) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {} {}: {}", what, path.display(), e)))
}

fn input_format(args: &InputArgs) -> Result<CorpusFormat, Failure> {
    args.input_format
        .or_else(|| CorpusFormat::from_path(&args.input))
        .ok_or_else(|| {
            Failure::input(format!(
                "cannot infer the format of {}; pass --input-format",
                args.input.display()
            ))
        })
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> CmdResult {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| {
        Failure::input(format!("cannot write {}: {}", path.display(), e))
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| fail(&e))?;
    tmp.as_file().sync_all().map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn write_output(path: Option<&Path>, contents: &str) -> CmdResult {
    match path {
        Some(path) => write_atomic(path, contents),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::input(format!("cannot write to standard output: {}", e)))
        }
    }
}

fn cmd_augment(args: &AugmentArgs) -> CmdResult {
    let format = input_format(&args.input)?;
    let mut store = match &args.resources {
        Some(dir) if !dir.is_dir() => {
            return Err(Failure::resource(format!(
                "resource directory {} does not exist",
                dir.display()
            )))
        }
        Some(dir) => ResourceStore::with_dir(dir),
        None => ResourceStore::builtin(),
    };

    let config = read_text(&args.pipeline, "pipeline")?;
    let node = parse_config(&config).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", args.pipeline.display(), f.message);
        f
    })?;
    let pipeline = node.build(&mut store)?;

    let source = read_text(&args.input.input, "input")?;
    let docs = format.parse(&source)?;
    let (augmented, stats) = run_corpus(&pipeline, &docs, args.seed)?;

    let out_format = args.output_format.unwrap_or(format);
    let (text, dropped) = out_format.emit(&augmented)?;
    if dropped > 0 {
        log::warn!(
            "{} entity spans not representable in {} were dropped",
            dropped,
            out_format
        );
    }
    write_output(args.output.as_deref(), &text)?;
    if let Some(path) = &args.stats {
        write_atomic(path, &(stats.to_json() + "\n"))?;
    }
    Ok(())
}

fn cmd_validate(args: &InputArgs) -> CmdResult {
    let format = input_format(args)?;
    let source = read_text(&args.input, "input")?;
    let docs = format.read(&source)?;
    let mut errors = 0usize;
    for (ordinal, doc) in docs.iter().enumerate() {
        for finding in validate(doc).findings {
            if finding.severity() == textaug::validate::Severity::Error {
                errors += 1;
                println!("doc {}: {}", ordinal, finding);
            } else {
                eprintln!("warning: doc {}: {}", ordinal, finding);
            }
        }
    }
    if errors == 0 {
        println!("OK {} docs", docs.len());
        Ok(())
    } else {
        Err(Failure::input(format!(
            "{} findings in {} docs",
            errors,
            docs.len()
        )))
    }
}

fn corpus_summary(docs: &[Document]) -> serde_json::Value {
    let mut ents: BTreeMap<&str, usize> = BTreeMap::new();
    for span in docs.iter().flat_map(|d| &d.ents) {
        *ents.entry(span.label.as_str()).or_default() += 1;
    }
    json!({
        "docs": docs.len(),
        "sentences": docs.iter().map(|d| d.sents.len()).sum::<usize>(),
        "tokens": docs.iter().map(|d| d.tokens.len()).sum::<usize>(),
        "ents": ents,
    })
}

fn cmd_stats(args: &StatsArgs) -> CmdResult {
    let format = input_format(&args.input)?;
    let source = read_text(&args.input.input, "input")?;
    let docs = format.read(&source)?;
    let text =
        serde_json::to_string_pretty(&corpus_summary(&docs)).expect("summary serializes") + "\n";
    write_output(args.output.as_deref(), &text)
}
