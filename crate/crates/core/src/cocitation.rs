//! Co-cited pair sets at the six levels.
//!
//! Within one citing document a pair is attributed to the most specific
//! level at which any two of its in-text citations co-occur; across
//! documents the per-journal level of a pair is the most specific level seen
//! in any document. Membership propagates upward, so the level sets are
//! nested: bracket ⊆ sentence ⊆ paragraph ⊆ section ⊆ article.

use std::collections::{BTreeMap, BTreeSet};

use log::warn;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;

use crate::matcher::ReferenceMatches;
use crate::model::{ArticleType, Document, Level, PairKey, RecordId, StructuralLocus};
use crate::rng;

/// Article types admitted to analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissionPolicy {
    pub admitted: Vec<ArticleType>,
}

impl Default for AdmissionPolicy {
    fn default() -> Self {
        AdmissionPolicy {
            admitted: vec![ArticleType::Research, ArticleType::ShortCommunication],
        }
    }
}

impl AdmissionPolicy {
    pub fn admits(&self, doc: &Document) -> bool {
        self.admitted.contains(&doc.article_type)
    }
}

/// Pairs co-cited in one document with their lowest level there.
pub type DocumentPairs = BTreeMap<PairKey, Level>;

/// Extracts every pair of distinct matched records cited in the body of
/// `doc`, attributed to the most specific level at which any two of their
/// citations co-occur. Citation multiplicity is ignored.
pub fn extract_pairs(doc: &Document, matches: &ReferenceMatches) -> DocumentPairs {
    let mut by_record: BTreeMap<&RecordId, Vec<StructuralLocus>> = BTreeMap::new();
    for c in doc.citations.iter().filter(|c| c.is_analyzed()) {
        if let Some(rec) = matches.get(&c.ref_id) {
            by_record.entry(rec).or_default().push(c.locus);
        }
    }
    let records: Vec<(&RecordId, Vec<StructuralLocus>)> = by_record.into_iter().collect();

    let mut pairs = DocumentPairs::new();
    for (i, (a, loci_a)) in records.iter().enumerate() {
        for (b, loci_b) in &records[i + 1..] {
            let mut level = Level::Article;
            'outer: for la in loci_a {
                for lb in loci_b {
                    level = level.max(la.shared_level(lb));
                    if level == Level::Bracket {
                        break 'outer;
                    }
                }
            }
            // records are iterated in canonical order, so (a, b) is canonical
            pairs.insert(
                PairKey {
                    id_a: (*a).clone(),
                    id_b: (*b).clone(),
                },
                level,
            );
        }
    }
    pairs
}

/// Per-journal pair sets. Article-and-below membership is stored as each
/// pair's lowest level; the journal level holds the sampled pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LevelSets {
    pub journal_name: String,
    lowest: BTreeMap<PairKey, Level>,
    pub journal_sample: BTreeSet<PairKey>,
}

impl LevelSets {
    pub fn new(journal_name: impl Into<String>) -> Self {
        LevelSets {
            journal_name: journal_name.into(),
            ..Default::default()
        }
    }

    /// Folds one document's pairs in, keeping the most specific level.
    pub fn absorb(&mut self, pairs: DocumentPairs) {
        for (pair, level) in pairs {
            self.note(pair, level);
        }
    }

    fn note(&mut self, pair: PairKey, level: Level) {
        self.lowest
            .entry(pair)
            .and_modify(|l| *l = (*l).max(level))
            .or_insert(level);
    }

    /// Associative, commutative union.
    pub fn merge(mut self, other: LevelSets) -> LevelSets {
        if self.lowest.len() < other.lowest.len() {
            return other.merge(self);
        }
        for (pair, level) in other.lowest {
            self.note(pair, level);
        }
        self.journal_sample.extend(other.journal_sample);
        if self.journal_name.is_empty() {
            self.journal_name = other.journal_name;
        }
        self
    }

    /// Lowest in-article level of a pair, if it is co-cited at all.
    pub fn lowest_level(&self, pair: &PairKey) -> Option<Level> {
        self.lowest.get(pair).copied()
    }

    /// Co-cited pairs with their lowest level, in canonical order.
    pub fn cocited(&self) -> impl Iterator<Item = (&PairKey, Level)> {
        self.lowest.iter().map(|(p, l)| (p, *l))
    }

    pub fn contains(&self, level: Level, pair: &PairKey) -> bool {
        match level {
            Level::Journal => self.journal_sample.contains(pair),
            _ => self.lowest.get(pair).is_some_and(|l| *l >= level),
        }
    }

    pub fn level_set(&self, level: Level) -> BTreeSet<&PairKey> {
        match level {
            Level::Journal => self.journal_sample.iter().collect(),
            _ => self
                .lowest
                .iter()
                .filter(|(_, l)| **l >= level)
                .map(|(p, _)| p)
                .collect(),
        }
    }

    pub fn count(&self, level: Level) -> usize {
        match level {
            Level::Journal => self.journal_sample.len(),
            _ => self.lowest.values().filter(|l| **l >= level).count(),
        }
    }
}

/// Builds the article-to-bracket sets of one journal from its documents.
/// Documents are processed in parallel; the merge is order-independent.
pub fn aggregate_levels(journal_name: &str, docs: &[(&Document, &ReferenceMatches)]) -> LevelSets {
    docs.par_iter()
        .map(|(doc, m)| {
            let mut sets = LevelSets::new(journal_name);
            sets.absorb(extract_pairs(doc, m));
            sets
        })
        .reduce(|| LevelSets::new(journal_name), LevelSets::merge)
}

/// Distinct matched records cited by each citing year's documents.
pub fn citation_pools(docs: &[(&Document, &ReferenceMatches)]) -> BTreeMap<i32, Vec<RecordId>> {
    let mut pools: BTreeMap<i32, BTreeSet<RecordId>> = BTreeMap::new();
    for (doc, m) in docs {
        let pool = pools.entry(doc.date.year).or_default();
        for r in &doc.references {
            if let Some(rec) = m.get(&r.ref_id) {
                pool.insert(rec.clone());
            }
        }
    }
    pools
        .into_iter()
        .map(|(y, set)| (y, set.into_iter().collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalSample {
    pub pairs: BTreeSet<PairKey>,
    pub draws: usize,
    /// Set when fewer than the requested pairs could be collected.
    pub diagnostic: Option<String>,
}

/// Samples journal-level pairs: draw a citing year with probability
/// proportional to its pool size, then two records with replacement from
/// that pool. Self-pairs and repeats are discarded until `n_target` unique
/// pairs exist or `100 * n_target` draws are spent.
pub fn sample_journal_pairs(
    pools: &BTreeMap<i32, Vec<RecordId>>,
    n_target: usize,
    seed: u64,
) -> JournalSample {
    let mut out = JournalSample {
        pairs: BTreeSet::new(),
        draws: 0,
        diagnostic: None,
    };
    if n_target == 0 {
        return out;
    }
    let usable: Vec<&Vec<RecordId>> = pools.values().filter(|p| p.len() >= 2).collect();
    if usable.is_empty() {
        let msg = "no citing-year pool holds two or more records; no journal-level pairs".to_string();
        warn!("{msg}");
        out.diagnostic = Some(msg);
        return out;
    }
    let weights = WeightedIndex::new(usable.iter().map(|p| p.len())).expect("positive weights");
    let mut rng = rng::stream(seed, "journal-sample");
    let budget = n_target.saturating_mul(100);
    while out.pairs.len() < n_target && out.draws < budget {
        out.draws += 1;
        let pool = usable[weights.sample(&mut rng)];
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        if let Ok(pair) = PairKey::new(a, b) {
            out.pairs.insert(pair);
        }
    }
    if out.pairs.len() < n_target {
        let msg = format!(
            "collected {} of {} journal-level pairs after {} draws",
            out.pairs.len(),
            n_target,
            out.draws
        );
        warn!("{msg}");
        out.diagnostic = Some(msg);
    }
    out
}
