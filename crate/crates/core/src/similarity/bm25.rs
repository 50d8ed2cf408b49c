//! Tokenization, floored IDF and BM25 over titles and abstracts.

use std::collections::HashMap;

use log::warn;

use crate::error::{Error, Result};

/// Lowercase alphanumeric tokens of a title and abstract.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedText {
    pub tokens: Vec<String>,
}

impl TokenizedText {
    /// Token count, the document length in the BM25 formula.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn term_counts(&self) -> HashMap<&str, usize> {
        let mut counts = HashMap::new();
        for t in &self.tokens {
            *counts.entry(t.as_str()).or_insert(0) += 1;
        }
        counts
    }

    /// Distinct tokens in first-occurrence order.
    pub fn unique(&self) -> Vec<&str> {
        let mut seen = std::collections::HashSet::new();
        self.tokens
            .iter()
            .map(String::as_str)
            .filter(|t| seen.insert(*t))
            .collect()
    }
}

/// Joins title and abstract, lowercases, splits on every non-alphanumeric
/// character and drops empty and single-character tokens.
pub fn tokenize(title: &str, abstract_text: &str) -> TokenizedText {
    let joined = format!("{title} {abstract_text}").to_lowercase();
    let tokens = joined
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() > 1)
        .map(str::to_string)
        .collect();
    TokenizedText { tokens }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 2.0, b: 0.75 }
    }
}

/// Collection statistics: document frequencies, IDF floored at zero, and the
/// mean token count.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    pub doc_count: usize,
    pub doc_freq: HashMap<String, usize>,
    pub idf: HashMap<String, f64>,
    pub avg_len: f64,
}

/// `ln((N - d + 0.5) / (d + 0.5))`, with negative values floored to zero.
pub fn floored_idf(doc_count: usize, doc_freq: usize) -> f64 {
    let n = doc_count as f64;
    let d = doc_freq as f64;
    ((n - d + 0.5) / (d + 0.5)).ln().max(0.0)
}

pub fn build_idf(collection: &[TokenizedText]) -> Result<IdfTable> {
    if collection.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let mut doc_freq: HashMap<String, usize> = HashMap::new();
    let mut total_len = 0usize;
    for text in collection {
        total_len += text.len();
        for t in text.unique() {
            *doc_freq.entry(t.to_string()).or_insert(0) += 1;
        }
    }
    let doc_count = collection.len();
    let idf = doc_freq
        .iter()
        .map(|(t, &d)| (t.clone(), floored_idf(doc_count, d)))
        .collect();
    Ok(IdfTable {
        doc_count,
        doc_freq,
        idf,
        avg_len: total_len as f64 / doc_count as f64,
    })
}

impl IdfTable {
    /// IDF of a token; tokens outside the collection weigh nothing.
    pub fn get(&self, token: &str) -> f64 {
        self.idf.get(token).copied().unwrap_or(0.0)
    }
}

fn term_weight(idf: f64, tf: f64, doc_len: f64, avg_len: f64, p: Bm25Params) -> f64 {
    idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * doc_len / avg_len))
}

/// Scores `d` against query `q`, summing over the distinct tokens of `q`.
pub fn bm25(q: &TokenizedText, d: &TokenizedText, idf: &IdfTable, params: Bm25Params) -> Result<f64> {
    if idf.avg_len <= 0.0 {
        return Err(Error::ZeroAverageLength);
    }
    let counts = d.term_counts();
    let doc_len = d.len() as f64;
    Ok(q.unique()
        .into_iter()
        .filter_map(|t| counts.get(t).map(|&n| (t, n)))
        .map(|(t, n)| term_weight(idf.get(t), n as f64, doc_len, idf.avg_len, params))
        .sum())
}

/// Mean of both scoring directions.
pub fn symmetric_bm25(
    q: &TokenizedText,
    d: &TokenizedText,
    idf: &IdfTable,
    params: Bm25Params,
) -> Result<f64> {
    Ok((bm25(q, d, idf, params)? + bm25(d, q, idf, params)?) / 2.0)
}

/// Divides every score by the maximum so the largest becomes 1. When no
/// score is positive the input is returned unchanged with a diagnostic.
/// Normalized values are only comparable within one journal.
pub fn normalize_bm25(scores: &[f64]) -> (Vec<f64>, Option<String>) {
    let max = scores.iter().copied().fold(0.0_f64, f64::max);
    if max <= 0.0 {
        let msg = format!("all {} BM25 scores are zero; normalization skipped", scores.len());
        warn!("{msg}");
        return (scores.to_vec(), Some(msg));
    }
    (scores.iter().map(|s| s / max).collect(), None)
}

/// Interned form of a collection for bulk pair scoring: token ids, per-text
/// sorted `(token, count)` lists and an IDF vector. Scores are identical to
/// [`bm25`] over the same table.
#[derive(Debug, Clone)]
pub struct Bm25Space {
    idf: Vec<f64>,
    texts: Vec<CompiledText>,
    avg_len: f64,
    params: Bm25Params,
}

#[derive(Debug, Clone, Default)]
struct CompiledText {
    terms: Vec<(u32, u32)>,
    len: f64,
}

impl Bm25Space {
    pub fn new(texts: &[TokenizedText], idf: &IdfTable, params: Bm25Params) -> Result<Self> {
        if idf.avg_len <= 0.0 {
            return Err(Error::ZeroAverageLength);
        }
        let mut vocab: HashMap<&str, u32> = HashMap::new();
        let mut weights = Vec::new();
        let compiled = texts
            .iter()
            .map(|text| {
                let mut terms: Vec<(u32, u32)> = text
                    .term_counts()
                    .into_iter()
                    .map(|(t, n)| {
                        let id = *vocab.entry(t).or_insert_with(|| {
                            weights.push(idf.get(t));
                            (weights.len() - 1) as u32
                        });
                        (id, n as u32)
                    })
                    .collect();
                terms.sort_unstable();
                CompiledText {
                    terms,
                    len: text.len() as f64,
                }
            })
            .collect();
        Ok(Bm25Space {
            idf: weights,
            texts: compiled,
            avg_len: idf.avg_len,
            params,
        })
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }

    /// Score of text `d` for query text `q` (indices into the input slice).
    pub fn score(&self, q: usize, d: usize) -> f64 {
        let (qt, dt) = (&self.texts[q], &self.texts[d]);
        let (mut i, mut j) = (0, 0);
        let mut sum = 0.0;
        while i < qt.terms.len() && j < dt.terms.len() {
            let (a, b) = (qt.terms[i].0, dt.terms[j].0);
            if a < b {
                i += 1;
            } else if a > b {
                j += 1;
            } else {
                let tf = f64::from(dt.terms[j].1);
                sum += term_weight(self.idf[a as usize], tf, dt.len, self.avg_len, self.params);
                i += 1;
                j += 1;
            }
        }
        sum
    }

    pub fn symmetric(&self, q: usize, d: usize) -> f64 {
        (self.score(q, d) + self.score(d, q)) / 2.0
    }
}
