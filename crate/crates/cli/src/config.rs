use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cocite_core::analytics::Measure;
use cocite_core::model::{ArticleType, Level};
use serde::Deserialize;

/// Settings for one pipeline run. Loaded from TOML; command-line flags
/// override individual fields.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Corpus files (`.jsonl`, `.ndjson`, `.xml`) or directories of them.
    pub corpus: Vec<PathBuf>,
    pub index: Option<PathBuf>,
    /// Journals to analyze; empty means all.
    pub journals: Vec<String>,
    pub admitted_types: Vec<ArticleType>,
    pub abbreviations: Option<PathBuf>,
    /// Journal-level pairs per journal; defaults to the journal's
    /// article-level pair count.
    pub journal_sample_size: Option<usize>,
    pub pr_sample_size: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub exclude_article_cocited: bool,
    pub exact_author_matching: bool,
    pub skip_invalid: bool,
    /// Measures for precision/recall.
    pub measures: Vec<Measure>,
    /// Levels for precision/recall.
    pub levels: Vec<Level>,
    pub ecdf_points: usize,
    pub bm25_k1: f64,
    pub bm25_b: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: Vec::new(),
            index: None,
            journals: Vec::new(),
            admitted_types: vec![ArticleType::Research, ArticleType::ShortCommunication],
            abbreviations: None,
            journal_sample_size: None,
            pr_sample_size: 10_000,
            seed: 42,
            out: PathBuf::from("cocite-run"),
            exclude_article_cocited: false,
            exact_author_matching: false,
            skip_invalid: false,
            measures: Measure::PR_DEFAULT.to_vec(),
            levels: Level::IN_ARTICLE.to_vec(),
            ecdf_points: 200,
            bm25_k1: 2.0,
            bm25_b: 0.75,
        }
    }
}

impl RunConfig {
    /// Reads a TOML config. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        cfg.corpus.iter_mut().for_each(rebase);
        if let Some(p) = cfg.index.as_mut() {
            rebase(p);
        }
        if let Some(p) = cfg.abbreviations.as_mut() {
            rebase(p);
        }
        rebase(&mut cfg.out);
        Ok(cfg)
    }

    pub fn wants_journal(&self, journal: &str) -> bool {
        self.journals.is_empty() || self.journals.iter().any(|j| j == journal)
    }
}
