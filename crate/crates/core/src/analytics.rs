//! Report shapes: per-level summaries, empirical CDFs, precision/recall
//! curves, the Price Index and per-journal descriptive statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::{index, SliceRandom};
use serde::{Deserialize, Serialize};

use crate::matcher::{BibIndex, ReferenceMatches};
use crate::model::{Document, Level, PairMeasures, RecordId};
use crate::rng;
use crate::{Error, Result};

/// One of the four pair measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "bm25_norm")]
    Bm25,
    #[serde(rename = "intel_overlap")]
    IntellectualOverlap,
    #[serde(rename = "author_overlap")]
    AuthorOverlap,
    #[serde(rename = "time_months")]
    TimeDistance,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Bm25,
        Measure::IntellectualOverlap,
        Measure::AuthorOverlap,
        Measure::TimeDistance,
    ];

    /// Measures used for precision/recall unless asked otherwise.
    pub const PR_DEFAULT: [Measure; 3] =
        [Measure::Bm25, Measure::IntellectualOverlap, Measure::AuthorOverlap];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Bm25 => "bm25_norm",
            Measure::IntellectualOverlap => "intel_overlap",
            Measure::AuthorOverlap => "author_overlap",
            Measure::TimeDistance => "time_months",
        }
    }

    pub fn parse(s: &str) -> Option<Measure> {
        Measure::ALL.into_iter().find(|m| m.as_str() == s)
    }

    /// Whether larger values mean more similar. False only for time distance.
    pub fn higher_is_closer(self) -> bool {
        self != Measure::TimeDistance
    }

    pub fn value(self, m: &PairMeasures) -> Option<f64> {
        match self {
            Measure::Bm25 => Some(m.bm25_normalized),
            Measure::IntellectualOverlap => m.intellectual_overlap,
            Measure::AuthorOverlap => m.author_overlap,
            Measure::TimeDistance => Some(f64::from(m.time_distance_months)),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Mean and median of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Center {
    pub mean: f64,
    pub median: f64,
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    Some(values.iter().sum::<f64>() / values.len() as f64)
}

/// Interpolated median: the middle element, or the average of the two
/// middle elements for even sizes.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(sorted_median(&sorted))
}

fn sorted_median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

pub fn center(values: &[f64]) -> Option<Center> {
    Some(Center { mean: mean(values)?, median: median(values)? })
}

/// Adjusted Fisher–Pearson sample skewness. Needs at least three values
/// and non-zero variance.
pub fn skewness(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    let nf = n as f64;
    let m = mean(values)?;
    let m2 = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / nf;
    let m3 = values.iter().map(|v| (v - m).powi(3)).sum::<f64>() / nf;
    if m2 <= 0.0 {
        return None;
    }
    let g1 = m3 / m2.powf(1.5);
    Some(g1 * (nf * (nf - 1.0)).sqrt() / (nf - 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub journal: String,
    pub level: Level,
    pub measure: Measure,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub skewness: Option<f64>,
}

/// Summarizes the defined values of one measure at one level. `None` when
/// no value is defined.
pub fn level_summary(
    journal: &str,
    level: Level,
    measure: Measure,
    values: impl IntoIterator<Item = Option<f64>>,
) -> Option<LevelSummary> {
    let values: Vec<f64> = values.into_iter().flatten().collect();
    let c = center(&values)?;
    Some(LevelSummary {
        journal: journal.to_string(),
        level,
        measure,
        count: values.len(),
        mean: c.mean,
        median: c.median,
        skewness: skewness(&values),
    })
}

/// Empirical CDF (fraction of values `<=` threshold) at each grid point.
pub fn cumulative_distribution(values: &[f64], grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::UnsortedGrid);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(grid
        .iter()
        .map(|&t| (t, sorted.partition_point(|&v| v <= t) as f64 / n))
        .collect())
}

/// `points` evenly spaced thresholds from the smallest to the largest value;
/// a single threshold when all values are equal.
pub fn default_grid(values: &[f64], points: usize) -> Vec<f64> {
    let Some(lo) = values.iter().copied().min_by(f64::total_cmp) else {
        return Vec::new();
    };
    let hi = values.iter().copied().max_by(f64::total_cmp).unwrap_or(lo);
    if hi <= lo || points < 2 {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points - 1).map(|i| lo + step * i as f64).collect();
    grid.push(hi);
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub rank: usize,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    pub points: Vec<PrPoint>,
    /// Pairs drawn from each class.
    pub sample_size: usize,
    pub diagnostic: Option<String>,
}

/// Ranks an equal-size sample of positive and negative pairs by a measure
/// and walks the ranking.
///
/// Undefined values rank last. Ties are broken by a seeded shuffle taken
/// before a stable sort, so the result depends only on the inputs, the seed
/// and `label`, which separates the random streams of different curves.
pub fn precision_recall(
    positives: &[Option<f64>],
    negatives: &[Option<f64>],
    higher_is_closer: bool,
    sample_size: usize,
    seed: u64,
    label: &str,
) -> Result<PrCurve> {
    if positives.is_empty() || negatives.is_empty() || sample_size == 0 {
        return Err(Error::EmptyClasses);
    }
    let n = sample_size.min(positives.len()).min(negatives.len());
    let diagnostic = (n < sample_size).then(|| {
        format!(
            "sample size clipped from {sample_size} to {n} ({} positives, {} negatives)",
            positives.len(),
            negatives.len()
        )
    });
    let mut rng = rng::stream(seed, label);
    let score = |v: Option<f64>| match v {
        Some(x) if higher_is_closer => x,
        Some(x) => -x,
        None => f64::NEG_INFINITY,
    };
    let mut ranked: Vec<(f64, bool)> = Vec::with_capacity(2 * n);
    for i in index::sample(&mut rng, positives.len(), n) {
        ranked.push((score(positives[i]), true));
    }
    for i in index::sample(&mut rng, negatives.len(), n) {
        ranked.push((score(negatives[i]), false));
    }
    ranked.shuffle(&mut rng);
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut tp = 0usize;
    let points = ranked
        .iter()
        .enumerate()
        .map(|(i, &(_, positive))| {
            tp += usize::from(positive);
            PrPoint {
                rank: i + 1,
                precision: tp as f64 / (i + 1) as f64,
                recall: tp as f64 / n as f64,
            }
        })
        .collect();
    Ok(PrCurve { points, sample_size: n, diagnostic })
}

/// Share of dated references published in the five years up to the citing
/// year. `None` without dated references.
pub fn price_index(doc: &Document) -> Option<f64> {
    let citing = doc.date.year;
    let years: Vec<i32> = doc.references.iter().filter_map(|r| r.year).collect();
    if years.is_empty() {
        return None;
    }
    let recent = years.iter().filter(|&&y| y >= citing - 5 && y <= citing).count();
    Some(recent as f64 / years.len() as f64)
}

/// Descriptive statistics of one journal's citing articles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JournalStats {
    pub journal: String,
    pub citing_articles: usize,
    pub references: usize,
    pub matched_references: usize,
    pub reference_match_rate: f64,
    pub references_per_article: Option<Center>,
    pub in_text_citations: usize,
    pub matched_in_text_citations: usize,
    pub in_text_match_rate: f64,
    pub in_text_per_article: Option<Center>,
    pub price_index: Option<f64>,
    pub authors_citing: Option<Center>,
    /// Over distinct matched cited records.
    pub authors_cited: Option<Center>,
    pub pair_counts: BTreeMap<Level, usize>,
}

fn rate(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn corpus_stats(
    journal: &str,
    docs: &[(&Document, &ReferenceMatches)],
    index: &BibIndex,
    pair_counts: BTreeMap<Level, usize>,
) -> JournalStats {
    let refs_per: Vec<f64> = docs.iter().map(|(d, _)| d.references.len() as f64).collect();
    let cites_per: Vec<f64> = docs.iter().map(|(d, _)| d.citations.len() as f64).collect();
    let references = docs.iter().map(|(d, _)| d.references.len()).sum();
    let matched_references = docs.iter().map(|(_, m)| m.matched_count()).sum();
    let in_text_citations = docs.iter().map(|(d, _)| d.citations.len()).sum();
    let matched_in_text_citations = docs
        .iter()
        .map(|(d, m)| d.citations.iter().filter(|c| m.get(&c.ref_id).is_some()).count())
        .sum();
    let prices: Vec<f64> = docs.iter().filter_map(|(d, _)| price_index(d)).collect();
    let authors_citing: Vec<f64> = docs.iter().map(|(d, _)| d.authors.len() as f64).collect();
    let cited: BTreeSet<&RecordId> = docs.iter().flat_map(|(_, m)| m.records()).collect();
    let authors_cited: Vec<f64> = cited
        .iter()
        .filter_map(|id| index.get(id))
        .map(|r| r.authors.len() as f64)
        .collect();
    JournalStats {
        journal: journal.to_string(),
        citing_articles: docs.len(),
        references,
        matched_references,
        reference_match_rate: rate(matched_references, references),
        references_per_article: center(&refs_per),
        in_text_citations,
        matched_in_text_citations,
        in_text_match_rate: rate(matched_in_text_citations, in_text_citations),
        in_text_per_article: center(&cites_per),
        price_index: mean(&prices),
        authors_citing: center(&authors_citing),
        authors_cited: center(&authors_cited),
        pair_counts,
    }
}
