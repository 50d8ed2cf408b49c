//! On-disk formats of the run directory.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cocite_core::model::{Level, PairKey, PairMeasures, RecordId};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub const DOCUMENTS: &str = "documents.jsonl";
pub const INDEX: &str = "index.jsonl";
pub const VALIDATION: &str = "validation.json";
pub const PAIRS: &str = "pairs.csv";
pub const MEASURES: &str = "measures.csv";
pub const SUMMARY: &str = "summary.json";
pub const ECDF: &str = "ecdf.csv";
pub const STATS: &str = "stats.json";
pub const PR: &str = "pr.csv";

/// First line of every CSV output.
pub fn header_line() -> String {
    format!("# cocite {}", env!("CARGO_PKG_VERSION"))
}

/// Rounds to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Fixed notation with at most 9 significant digits and '.' as separator.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round9(x))
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// Path of a predecessor's output, or an error naming the stage to run.
pub fn require(dir: &Path, file: &str, stage: &str) -> Result<PathBuf> {
    let path = dir.join(file);
    if !path.is_file() {
        bail!(
            "{} not found; run the `{stage}` stage first",
            path.display()
        );
    }
    Ok(path)
}

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut w = BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads one JSON value per non-blank line, reporting `file:line` on error.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let reader = BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    );
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.with_context(|| format!("{}:{}", path.display(), i + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?,
        );
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let mut file = BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(file, "{}", header_line())?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))
}

/// One row of `pairs.csv`. Rows with `lowest_level = journal` are the
/// journal-level sample; their flags record whether the sampled pair is
/// also co-cited inside an article.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub journal: String,
    pub pair: PairKey,
    pub lowest_level: Level,
    /// Co-citation flags, article through bracket.
    pub flags: [bool; 5],
}

impl PairRow {
    pub const HEADER: [&'static str; 9] = [
        "journal",
        "id_a",
        "id_b",
        "lowest_level",
        "in_article",
        "in_section",
        "in_paragraph",
        "in_sentence",
        "in_bracket",
    ];

    /// Flags implied by a lowest co-citation level (`None` = not co-cited).
    pub fn flags_for(level: Option<Level>) -> [bool; 5] {
        let mut flags = [false; 5];
        if let Some(level) = level {
            for (f, l) in flags.iter_mut().zip(Level::IN_ARTICLE) {
                *f = l <= level && level != Level::Journal;
            }
        }
        flags
    }

    /// Whether the row belongs to the pair set of `level`.
    pub fn in_level(&self, level: Level) -> bool {
        in_level(self.lowest_level, level)
    }
}

/// Set membership from the lowest level of a row: journal rows form the
/// journal set, every other row belongs to its level and all above it
/// except journal.
pub fn in_level(lowest: Level, level: Level) -> bool {
    if level == Level::Journal {
        lowest == Level::Journal
    } else {
        lowest != Level::Journal && lowest >= level
    }
}

fn flag(s: &str, path: &Path, line: u64) -> Result<bool> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => bail!("{}:{line}: expected 0 or 1, got {s:?}", path.display()),
    }
}

fn level(s: &str, path: &Path, line: u64) -> Result<Level> {
    Level::parse(s).with_context(|| format!("{}:{line}: unknown level {s:?}", path.display()))
}

fn pair(a: &str, b: &str, path: &Path, line: u64) -> Result<PairKey> {
    let (a, b) = (RecordId::from(a), RecordId::from(b));
    let key = PairKey::new(&a, &b).with_context(|| format!("{}:{line}", path.display()))?;
    if key.id_a != a {
        bail!("{}:{line}: pair ids out of canonical order", path.display());
    }
    Ok(key)
}

pub fn write_pairs(path: &Path, rows: &[PairRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(PairRow::HEADER)?;
    for r in rows {
        let mut rec = vec![
            r.journal.clone(),
            r.pair.id_a.to_string(),
            r.pair.id_b.to_string(),
            r.lowest_level.as_str().to_string(),
        ];
        rec.extend(r.flags.iter().map(|&f| if f { "1" } else { "0" }.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pairs(path: &Path) -> Result<Vec<PairRow>> {
    let mut rows = Vec::new();
    for rec in csv_reader(path)?.records() {
        let rec = rec.with_context(|| format!("reading {}", path.display()))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != PairRow::HEADER.len() {
            bail!("{}:{line}: expected {} fields", path.display(), PairRow::HEADER.len());
        }
        let mut flags = [false; 5];
        for (i, f) in flags.iter_mut().enumerate() {
            *f = flag(&rec[4 + i], path, line)?;
        }
        rows.push(PairRow {
            journal: rec[0].to_string(),
            pair: pair(&rec[1], &rec[2], path, line)?,
            lowest_level: level(&rec[3], path, line)?,
            flags,
        });
    }
    Ok(rows)
}

/// One row of `measures.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRow {
    pub journal: String,
    pub pair: PairKey,
    pub lowest_level: Level,
    pub measures: PairMeasures,
}

impl MeasureRow {
    pub const HEADER: [&'static str; 9] = [
        "journal",
        "id_a",
        "id_b",
        "lowest_level",
        "bm25_raw",
        "bm25_norm",
        "intel_overlap",
        "author_overlap",
        "time_months",
    ];
}

pub fn write_measures(path: &Path, rows: &[MeasureRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(MeasureRow::HEADER)?;
    for r in rows {
        let m = &r.measures;
        w.write_record([
            r.journal.as_str(),
            r.pair.id_a.as_str(),
            r.pair.id_b.as_str(),
            r.lowest_level.as_str(),
            &fmt_num(m.bm25_raw),
            &fmt_num(m.bm25_normalized),
            &fmt_opt(m.intellectual_overlap),
            &fmt_opt(m.author_overlap),
            &m.time_distance_months.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_measures(path: &Path) -> Result<Vec<MeasureRow>> {
    let num = |s: &str, line: u64| -> Result<f64> {
        s.parse()
            .with_context(|| format!("{}:{line}: bad number {s:?}", path.display()))
    };
    let opt = |s: &str, line: u64| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            num(s, line).map(Some)
        }
    };
    let mut rows = Vec::new();
    for rec in csv_reader(path)?.records() {
        let rec = rec.with_context(|| format!("reading {}", path.display()))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != MeasureRow::HEADER.len() {
            bail!("{}:{line}: expected {} fields", path.display(), MeasureRow::HEADER.len());
        }
        rows.push(MeasureRow {
            journal: rec[0].to_string(),
            pair: pair(&rec[1], &rec[2], path, line)?,
            lowest_level: level(&rec[3], path, line)?,
            measures: PairMeasures {
                bm25_raw: num(&rec[4], line)?,
                bm25_normalized: num(&rec[5], line)?,
                intellectual_overlap: opt(&rec[6], line)?,
                author_overlap: opt(&rec[7], line)?,
                time_distance_months: rec[8]
                    .parse()
                    .with_context(|| format!("{}:{line}: bad month count", path.display()))?,
            },
        });
    }
    Ok(rows)
}
