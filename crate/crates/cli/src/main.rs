use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cocite_cli::{io, stages, RunConfig};
use cocite_core::analytics::Measure;
use cocite_core::model::{ArticleType, Level};
use cocite_core::synth::{generate, SynthConfig};

#[derive(Parser)]
#[command(name = "cocite", version, about = "Co-citation level analysis over full-text corpora")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Restrict the analysis to a journal (repeatable)
    #[arg(long = "journal", global = true)]
    journals: Vec<String>,
    /// Run directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Admitted article types (repeatable; default research, short_communication)
    #[arg(long = "admit", global = true, value_parser = parse_article_type)]
    admitted: Vec<ArticleType>,
    /// Log verbosity: -v info, -vv debug
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate the corpus and bibliographic index
    Ingest {
        /// Corpus files (.jsonl, .ndjson, .xml) or directories
        corpus: Vec<PathBuf>,
        #[arg(long)]
        index: Option<PathBuf>,
        /// Abbreviation list for sentence splitting, one entry per line
        #[arg(long)]
        abbreviations: Option<PathBuf>,
        /// Store valid documents even when others fail validation
        #[arg(long)]
        skip_invalid: bool,
    },
    /// Extract co-cited pairs per level and sample journal-level pairs
    Pairs {
        /// Journal-level pairs per journal (default: article-level pair count)
        #[arg(long)]
        journal_sample_size: Option<usize>,
    },
    /// Compute BM25, intellectual overlap, author overlap and time distance
    Measures {
        /// Use maximum bipartite matching for author overlap
        #[arg(long)]
        exact_author_matching: bool,
    },
    /// Write per-level summaries, cumulative distributions and statistics
    Report {
        #[arg(long)]
        ecdf_points: Option<usize>,
    },
    /// Precision/recall of each level against journal-level pairs
    Pr(PrArgs),
    /// Run every stage in order
    Run {
        corpus: Vec<PathBuf>,
        #[arg(long)]
        index: Option<PathBuf>,
        #[command(flatten)]
        pr: PrArgs,
    },
    /// Write a synthetic corpus and index with planted structure
    Synth {
        #[arg(long, default_value_t = 200)]
        documents: usize,
        /// Journal names (repeatable)
        #[arg(long = "name")]
        names: Vec<String>,
        /// Output directory for corpus.jsonl and index.jsonl
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Args)]
struct PrArgs {
    #[arg(long = "level", value_parser = parse_level)]
    levels: Vec<Level>,
    #[arg(long = "measure", value_parser = parse_measure)]
    measures: Vec<Measure>,
    #[arg(long)]
    sample_size: Option<usize>,
    /// Drop journal-level pairs that are also co-cited inside an article
    #[arg(long)]
    exclude_article_cocited: bool,
}

fn parse_level(s: &str) -> Result<Level, String> {
    Level::parse(s).ok_or_else(|| format!("unknown level {s:?}"))
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    Measure::parse(s).ok_or_else(|| {
        let names: Vec<_> = Measure::ALL.iter().map(|m| m.as_str()).collect();
        format!("unknown measure {s:?}; expected one of {}", names.join(", "))
    })
}

fn parse_article_type(s: &str) -> Result<ArticleType, String> {
    match s {
        "research" => Ok(ArticleType::Research),
        "short_communication" => Ok(ArticleType::ShortCommunication),
        "review" => Ok(ArticleType::Review),
        "other" => Ok(ArticleType::Other),
        _ => Err(format!("unknown article type {s:?}")),
    }
}

impl PrArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if !self.levels.is_empty() {
            cfg.levels = self.levels.clone();
        }
        if !self.measures.is_empty() {
            cfg.measures = self.measures.clone();
        }
        if let Some(n) = self.sample_size {
            cfg.pr_sample_size = n;
        }
        cfg.exclude_article_cocited |= self.exclude_article_cocited;
    }
}

fn base_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if !g.journals.is_empty() {
        cfg.journals = g.journals.clone();
    }
    if let Some(out) = &g.out {
        cfg.out = out.clone();
    }
    if !g.admitted.is_empty() {
        cfg.admitted_types = g.admitted.clone();
    }
    Ok(cfg)
}

fn synth(documents: usize, names: Vec<String>, dir: &PathBuf, seed: u64) -> Result<String> {
    let mut cfg = SynthConfig { documents, seed, ..SynthConfig::default() };
    if !names.is_empty() {
        cfg.journals = names;
    }
    let corpus = generate(&cfg);
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    io::write_jsonl(&dir.join("corpus.jsonl"), &corpus.documents)?;
    io::write_jsonl(&dir.join("index.jsonl"), &corpus.index)?;
    Ok(format!(
        "wrote {} documents and {} index records to {}",
        corpus.documents.len(),
        corpus.index.len(),
        dir.display()
    ))
}

fn run(cli: Cli) -> Result<Vec<String>> {
    let mut cfg = base_config(&cli.global)?;
    let messages = match cli.command {
        Command::Ingest { corpus, index, abbreviations, skip_invalid } => {
            if !corpus.is_empty() {
                cfg.corpus = corpus;
            }
            cfg.index = index.or(cfg.index);
            cfg.abbreviations = abbreviations.or(cfg.abbreviations);
            cfg.skip_invalid |= skip_invalid;
            vec![stages::ingest(&cfg)?]
        }
        Command::Pairs { journal_sample_size } => {
            cfg.journal_sample_size = journal_sample_size.or(cfg.journal_sample_size);
            vec![stages::pairs(&cfg)?]
        }
        Command::Measures { exact_author_matching } => {
            cfg.exact_author_matching |= exact_author_matching;
            vec![stages::measures(&cfg)?]
        }
        Command::Report { ecdf_points } => {
            cfg.ecdf_points = ecdf_points.unwrap_or(cfg.ecdf_points);
            vec![stages::report(&cfg)?]
        }
        Command::Pr(args) => {
            args.apply(&mut cfg);
            vec![stages::pr(&cfg)?]
        }
        Command::Run { corpus, index, pr } => {
            if !corpus.is_empty() {
                cfg.corpus = corpus;
            }
            cfg.index = index.or(cfg.index);
            pr.apply(&mut cfg);
            stages::run_all(&cfg)?
        }
        Command::Synth { documents, names, dir } => vec![synth(documents, names, &dir, cfg.seed)?],
    };
    Ok(messages)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(messages) => {
            for m in messages {
                println!("{m}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
