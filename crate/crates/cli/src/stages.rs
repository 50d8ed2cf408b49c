//! The five pipeline stages. Each reads its predecessor's files from the
//! run directory and writes its own.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cocite_core::analytics::{
    corpus_stats, cumulative_distribution, default_grid, level_summary, precision_recall,
    Measure,
};
use cocite_core::cocitation::{aggregate_levels, citation_pools, sample_journal_pairs, AdmissionPolicy};
use cocite_core::format::{RawBibRecord, RawDocument};
use cocite_core::matcher::{match_references, BibIndex, ReferenceMatches};
use cocite_core::measures::MeasureContext;
use cocite_core::model::{BibRecord, Document, Level, RecordId};
use cocite_core::parser::{jats, parse_document, Abbreviations};
use cocite_core::rng;
use cocite_core::similarity::{AuthorMatching, Bm25Params};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::io::{self, MeasureRow, PairRow};

fn generator() -> String {
    format!("cocite {}", env!("CARGO_PKG_VERSION"))
}

/// Rounds every float in a JSON tree to 9 significant digits.
fn rounded(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(io::round9(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(items) => Value::Array(items.into_iter().map(rounded).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

fn write_report<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    io::write_json(path, &rounded(serde_json::to_value(value)?))
}

fn corpus_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let wanted = |p: &Path| {
        matches!(
            p.extension().and_then(|e| e.to_str()),
            Some("jsonl" | "ndjson" | "json" | "xml")
        )
    };
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(path)
                .with_context(|| format!("listing {}", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && wanted(p))
                .collect();
            found.sort();
            files.extend(found);
        } else if path.is_file() {
            files.push(path.clone());
        } else {
            bail!("corpus path {} does not exist", path.display());
        }
    }
    Ok(files)
}

/// Raw documents with a `file:line` origin for diagnostics.
fn read_corpus(files: &[PathBuf]) -> Result<Vec<(String, RawDocument)>> {
    let mut docs = Vec::new();
    for file in files {
        if file.extension().and_then(|e| e.to_str()) == Some("xml") {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("reading {}", file.display()))?;
            let doc = jats::parse_jats(&text).with_context(|| file.display().to_string())?;
            docs.push((file.display().to_string(), doc));
        } else {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("reading {}", file.display()))?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let origin = format!("{}:{}", file.display(), i + 1);
                let doc: RawDocument = serde_json::from_str(line).with_context(|| origin.clone())?;
                docs.push((origin, doc));
            }
        }
    }
    Ok(docs)
}

#[derive(Debug, Default, Serialize)]
struct MatchTotals {
    documents: usize,
    references: usize,
    matched_references: usize,
    reference_match_rate: f64,
    in_text_citations: usize,
    matched_in_text_citations: usize,
    in_text_match_rate: f64,
}

impl MatchTotals {
    fn add(&mut self, doc: &Document, m: &ReferenceMatches) {
        self.documents += 1;
        self.references += doc.references.len();
        self.matched_references += m.matched_count();
        self.in_text_citations += doc.citations.len();
        self.matched_in_text_citations +=
            doc.citations.iter().filter(|c| m.get(&c.ref_id).is_some()).count();
    }

    fn finish(mut self) -> Self {
        let rate = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        self.reference_match_rate = rate(self.matched_references, self.references);
        self.in_text_match_rate = rate(self.matched_in_text_citations, self.in_text_citations);
        self
    }
}

/// Parses and validates the corpus and index, then stores them in the run
/// directory with a validation report.
pub fn ingest(cfg: &RunConfig) -> Result<String> {
    let index_path = cfg.index.as_ref().context("no bibliographic index given (--index)")?;
    let files = corpus_files(&cfg.corpus)?;
    let raw_docs = read_corpus(&files)?;
    if raw_docs.is_empty() {
        bail!("no documents found in the corpus paths");
    }
    let abbreviations = match &cfg.abbreviations {
        Some(p) => Abbreviations::from_file(p).with_context(|| p.display().to_string())?,
        None => Abbreviations::default(),
    };

    let parsed: Vec<std::result::Result<Document, String>> = raw_docs
        .par_iter()
        .map(|(origin, raw)| {
            parse_document(raw, &abbreviations).map_err(|e| format!("{origin}: document {}: {e}", raw.doc_id))
        })
        .collect();
    let mut errors = Vec::new();
    let mut documents = Vec::new();
    let mut seen = HashSet::new();
    for (result, (origin, _)) in parsed.into_iter().zip(&raw_docs) {
        match result {
            Ok(doc) if !seen.insert(doc.doc_id.clone()) => {
                errors.push(format!("{origin}: duplicate document id {}", doc.doc_id));
            }
            Ok(doc) => documents.push(doc),
            Err(e) => errors.push(e),
        }
    }

    let raw_index: Vec<RawBibRecord> = io::read_jsonl(index_path)?;
    let index = BibIndex::from_raw(&raw_index).with_context(|| index_path.display().to_string())?;

    std::fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let matches: Vec<ReferenceMatches> = documents.par_iter().map(|d| match_references(d, &index)).collect();
    let mut per_journal: BTreeMap<&str, MatchTotals> = BTreeMap::new();
    let mut totals = MatchTotals::default();
    for (doc, m) in documents.iter().zip(&matches) {
        per_journal.entry(&doc.journal_name).or_default().add(doc, m);
        totals.add(doc, m);
    }
    let collisions: Vec<Value> = matches
        .iter()
        .flat_map(|m| &m.collisions)
        .map(|c| {
            json!({
                "doc_id": c.doc_id,
                "ref_id": c.ref_id,
                "key": c.key.to_string(),
                "records": c.records,
            })
        })
        .collect();
    let index_collisions: Vec<Value> = index
        .key_collisions()
        .into_iter()
        .map(|(k, ids)| json!({ "key": k.to_string(), "records": ids }))
        .collect();
    let per_journal: BTreeMap<&str, MatchTotals> =
        per_journal.into_iter().map(|(j, t)| (j, t.finish())).collect();
    let report = json!({
        "generator": generator(),
        "files": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
        "index_records": index.len(),
        "errors": errors,
        "totals": totals.finish(),
        "journals": per_journal,
        "reference_collisions": collisions,
        "index_key_collisions": index_collisions,
    });
    write_report(&cfg.out.join(io::VALIDATION), &report)?;

    if !errors.is_empty() {
        for e in &errors {
            warn!("{e}");
        }
        if !cfg.skip_invalid {
            bail!(
                "{} invalid document(s); first: {}",
                errors.len(),
                errors[0]
            );
        }
    }
    if documents.is_empty() {
        bail!("no documents passed validation");
    }
    io::write_jsonl(&cfg.out.join(io::DOCUMENTS), &documents)?;
    io::write_jsonl(&cfg.out.join(io::INDEX), index.records())?;
    Ok(format!(
        "ingested {} documents and {} index records ({} rejected)",
        documents.len(),
        index.len(),
        errors.len()
    ))
}

struct Store {
    documents: Vec<Document>,
    index: BibIndex,
}

fn load_store(dir: &Path) -> Result<Store> {
    let documents = io::read_jsonl(&io::require(dir, io::DOCUMENTS, "ingest")?)?;
    let records: Vec<BibRecord> = io::read_jsonl(&io::require(dir, io::INDEX, "ingest")?)?;
    Ok(Store { documents, index: BibIndex::new(records)? })
}

/// Admitted documents of the selected journals with their reference
/// matches, grouped by journal.
fn journal_documents<'a>(
    cfg: &RunConfig,
    store: &'a Store,
) -> BTreeMap<&'a str, Vec<(&'a Document, ReferenceMatches)>> {
    let policy = AdmissionPolicy { admitted: cfg.admitted_types.clone() };
    let selected: Vec<&Document> = store
        .documents
        .iter()
        .filter(|d| policy.admits(d) && cfg.wants_journal(&d.journal_name))
        .collect();
    let matched: Vec<_> = selected
        .par_iter()
        .map(|d| (*d, match_references(d, &store.index)))
        .collect();
    let mut out: BTreeMap<&str, Vec<_>> = BTreeMap::new();
    for (doc, m) in matched {
        out.entry(doc.journal_name.as_str()).or_default().push((doc, m));
    }
    out
}

fn borrowed<'a>(docs: &'a [(&'a Document, ReferenceMatches)]) -> Vec<(&'a Document, &'a ReferenceMatches)> {
    docs.iter().map(|(d, m)| (*d, m)).collect()
}

/// Extracts co-cited pairs per level and draws the journal-level sample.
pub fn pairs(cfg: &RunConfig) -> Result<String> {
    let store = load_store(&cfg.out)?;
    let journals = journal_documents(cfg, &store);
    if journals.is_empty() {
        bail!("no admitted documents for the selected journals");
    }
    let mut rows = Vec::new();
    for (journal, docs) in &journals {
        let docs = borrowed(docs);
        let sets = aggregate_levels(journal, &docs);
        let pools = citation_pools(&docs);
        let n_target = cfg.journal_sample_size.unwrap_or_else(|| sets.count(Level::Article));
        let sample = sample_journal_pairs(
            &pools,
            n_target,
            rng::derive_seed(cfg.seed, &format!("journal/{journal}")),
        );
        info!(
            "{journal}: {} documents, {} article-level pairs, {} journal-level pairs",
            docs.len(),
            sets.count(Level::Article),
            sample.pairs.len()
        );
        for (pair, level) in sets.cocited() {
            rows.push(PairRow {
                journal: journal.to_string(),
                pair: pair.clone(),
                lowest_level: level,
                flags: PairRow::flags_for(Some(level)),
            });
        }
        for pair in &sample.pairs {
            rows.push(PairRow {
                journal: journal.to_string(),
                pair: pair.clone(),
                lowest_level: Level::Journal,
                flags: PairRow::flags_for(sets.lowest_level(pair)),
            });
        }
    }
    io::write_pairs(&cfg.out.join(io::PAIRS), &rows)?;
    Ok(format!("wrote {} pair rows for {} journal(s)", rows.len(), journals.len()))
}

/// Computes the four measures for every row of `pairs.csv`.
pub fn measures(cfg: &RunConfig) -> Result<String> {
    let pair_rows = io::read_pairs(&io::require(&cfg.out, io::PAIRS, "pairs")?)?;
    let store = load_store(&cfg.out)?;
    let journals = journal_documents(cfg, &store);
    let mut by_journal: BTreeMap<&str, Vec<&PairRow>> = BTreeMap::new();
    for row in &pair_rows {
        by_journal.entry(&row.journal).or_default().push(row);
    }
    let params = Bm25Params { k1: cfg.bm25_k1, b: cfg.bm25_b };
    let mode = if cfg.exact_author_matching { AuthorMatching::Exact } else { AuthorMatching::Greedy };

    let mut out = Vec::with_capacity(pair_rows.len());
    for (journal, rows) in by_journal {
        let docs = journals
            .get(journal)
            .with_context(|| format!("pairs.csv names journal {journal:?}, which has no admitted documents; rerun `pairs`"))?;
        let mut universe: BTreeSet<RecordId> =
            citation_pools(&borrowed(docs)).into_values().flatten().collect();
        for r in &rows {
            universe.insert(r.pair.id_a.clone());
            universe.insert(r.pair.id_b.clone());
        }
        let ctx = MeasureContext::new(&store.index, &universe, params, mode)
            .with_context(|| format!("building the measure space of {journal}"))?;
        let keys: Vec<_> = rows.iter().map(|r| r.pair.clone()).collect();
        let (measures, diagnostic) = ctx.measure_all(&keys)?;
        if let Some(d) = diagnostic {
            warn!("{journal}: {d}");
        }
        out.extend(rows.iter().zip(measures).map(|(r, m)| MeasureRow {
            journal: r.journal.clone(),
            pair: r.pair.clone(),
            lowest_level: r.lowest_level,
            measures: m,
        }));
    }
    io::write_measures(&cfg.out.join(io::MEASURES), &out)?;
    Ok(format!("wrote {} measure rows", out.len()))
}

fn values<'a>(rows: &'a [&MeasureRow], level: Level, measure: Measure) -> impl Iterator<Item = Option<f64>> + 'a {
    rows.iter()
        .filter(move |r| io::in_level(r.lowest_level, level))
        .map(move |r| measure.value(&r.measures))
}

/// Per-level summaries, cumulative distributions and descriptive statistics.
pub fn report(cfg: &RunConfig) -> Result<String> {
    let rows = io::read_measures(&io::require(&cfg.out, io::MEASURES, "measures")?)?;
    let store = load_store(&cfg.out)?;
    let journals = journal_documents(cfg, &store);
    let mut by_journal: BTreeMap<&str, Vec<&MeasureRow>> = BTreeMap::new();
    for row in &rows {
        by_journal.entry(&row.journal).or_default().push(row);
    }

    let mut summaries = Vec::new();
    let mut ecdf = io::csv_writer(&cfg.out.join(io::ECDF))?;
    ecdf.write_record(["journal", "level", "measure", "threshold", "fraction"])?;
    let mut stats = Vec::new();
    for (journal, rows) in &by_journal {
        for measure in Measure::ALL {
            let all: Vec<f64> = rows.iter().filter_map(|r| measure.value(&r.measures)).collect();
            let grid = default_grid(&all, cfg.ecdf_points);
            for level in Level::ALL {
                if let Some(s) = level_summary(journal, level, measure, values(rows, level, measure)) {
                    summaries.push(s);
                }
                let vals: Vec<f64> = values(rows, level, measure).flatten().collect();
                if vals.is_empty() {
                    continue;
                }
                for (t, f) in cumulative_distribution(&vals, &grid)? {
                    ecdf.write_record([
                        journal,
                        level.as_str(),
                        measure.as_str(),
                        &io::fmt_num(t),
                        &io::fmt_num(f),
                    ])?;
                }
            }
        }
        let counts = Level::ALL
            .into_iter()
            .map(|l| (l, rows.iter().filter(|r| io::in_level(r.lowest_level, l)).count()))
            .collect();
        let docs = journals.get(journal).map(|d| borrowed(d)).unwrap_or_default();
        stats.push(corpus_stats(journal, &docs, &store.index, counts));
    }
    ecdf.flush()?;
    write_report(
        &cfg.out.join(io::SUMMARY),
        &json!({ "generator": generator(), "summaries": summaries }),
    )?;
    write_report(&cfg.out.join(io::STATS), &json!({ "generator": generator(), "journals": stats }))?;
    Ok(format!("wrote {} summaries for {} journal(s)", summaries.len(), by_journal.len()))
}

/// Precision/recall curves of each level against the journal-level sample.
pub fn pr(cfg: &RunConfig) -> Result<String> {
    let rows = io::read_measures(&io::require(&cfg.out, io::MEASURES, "measures")?)?;
    let mut by_journal: BTreeMap<&str, Vec<&MeasureRow>> = BTreeMap::new();
    for row in &rows {
        by_journal.entry(&row.journal).or_default().push(row);
    }
    let mut w = io::csv_writer(&cfg.out.join(io::PR))?;
    w.write_record(["journal", "level", "measure", "rank", "precision", "recall"])?;
    let mut curves = 0;
    for (journal, rows) in &by_journal {
        let cocited: HashSet<_> = rows
            .iter()
            .filter(|r| r.lowest_level != Level::Journal)
            .map(|r| &r.pair)
            .collect();
        let negatives: Vec<&MeasureRow> = rows
            .iter()
            .filter(|r| r.lowest_level == Level::Journal)
            .filter(|r| !(cfg.exclude_article_cocited && cocited.contains(&r.pair)))
            .copied()
            .collect();
        for &level in cfg.levels.iter().filter(|l| **l != Level::Journal) {
            for &measure in &cfg.measures {
                let pos: Vec<Option<f64>> = values(rows, level, measure).collect();
                let neg: Vec<Option<f64>> = negatives.iter().map(|r| measure.value(&r.measures)).collect();
                if pos.is_empty() || neg.is_empty() {
                    warn!("{journal}: no {level} or journal-level pairs; skipping {measure}");
                    continue;
                }
                let curve = precision_recall(
                    &pos,
                    &neg,
                    measure.higher_is_closer(),
                    cfg.pr_sample_size,
                    cfg.seed,
                    &format!("pr/{journal}/{level}/{measure}"),
                )?;
                if let Some(d) = &curve.diagnostic {
                    warn!("{journal} {level} {measure}: {d}");
                }
                for p in &curve.points {
                    w.write_record([
                        journal,
                        level.as_str(),
                        measure.as_str(),
                        &p.rank.to_string(),
                        &io::fmt_num(p.precision),
                        &io::fmt_num(p.recall),
                    ])?;
                }
                curves += 1;
            }
        }
    }
    w.flush()?;
    Ok(format!("wrote {curves} precision/recall curves"))
}

/// Runs every stage in order.
pub fn run_all(cfg: &RunConfig) -> Result<Vec<String>> {
    Ok(vec![ingest(cfg)?, pairs(cfg)?, measures(cfg)?, report(cfg)?, pr(cfg)?])
}
