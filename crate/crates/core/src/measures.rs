//! Per-pair measure computation over one journal's record universe.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::matcher::{BibIndex, NormalizedName};
use crate::model::{PairKey, PairMeasures, PubDate, RecordId, RefKey};
use crate::similarity::{
    author_overlap_normalized, build_idf, intellectual_overlap, normalize_bm25, time_distance,
    tokenize, AuthorMatching, Bm25Params, Bm25Space,
};
use crate::{Error, Result};

struct RecordFeatures {
    authors: Vec<NormalizedName>,
    references: BTreeSet<RefKey>,
    date: PubDate,
}

/// Read-only state for measuring pairs of one journal: the BM25 space of the
/// journal's cited records plus their authors, references and dates.
pub struct MeasureContext {
    position: HashMap<RecordId, usize>,
    features: Vec<RecordFeatures>,
    space: Bm25Space,
    author_mode: AuthorMatching,
}

impl MeasureContext {
    /// `universe` is the journal's collection for IDF and average length.
    /// Records missing from the index are skipped with a warning.
    pub fn new(
        index: &BibIndex,
        universe: &BTreeSet<RecordId>,
        params: Bm25Params,
        author_mode: AuthorMatching,
    ) -> Result<Self> {
        let records: Vec<_> = universe
            .iter()
            .filter_map(|id| {
                let rec = index.get(id);
                if rec.is_none() {
                    log::warn!("record {id} is not in the index");
                }
                rec
            })
            .collect();
        let texts: Vec<_> = records
            .par_iter()
            .map(|r| tokenize(&r.title, &r.abstract_text))
            .collect();
        let idf = build_idf(&texts)?;
        let space = Bm25Space::new(&texts, &idf, params)?;
        let features = records
            .iter()
            .map(|r| RecordFeatures {
                authors: r.authors.iter().map(NormalizedName::from).collect(),
                references: r.reference_keys.iter().cloned().collect(),
                date: r.date,
            })
            .collect();
        let position = records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.record_id.clone(), i))
            .collect();
        Ok(MeasureContext { position, features, space, author_mode })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    fn slot(&self, id: &RecordId) -> Result<usize> {
        self.position
            .get(id)
            .copied()
            .ok_or_else(|| Error::Internal(format!("record {id} is outside the measure universe")))
    }

    /// All measures of one pair; `bm25_normalized` is left equal to the raw
    /// score until [`normalize_rows`] runs over the whole journal.
    pub fn measure(&self, pair: &PairKey) -> Result<PairMeasures> {
        let (a, b) = (self.slot(&pair.id_a)?, self.slot(&pair.id_b)?);
        let (fa, fb) = (&self.features[a], &self.features[b]);
        let raw = self.space.symmetric(a, b);
        Ok(PairMeasures {
            bm25_raw: raw,
            bm25_normalized: raw,
            intellectual_overlap: intellectual_overlap(&fa.references, &fb.references),
            author_overlap: author_overlap_normalized(&fa.authors, &fb.authors, self.author_mode),
            time_distance_months: time_distance(&fa.date, &fb.date),
        })
    }

    /// Measures every pair in parallel, keeping input order, then applies
    /// the per-journal BM25 normalization.
    pub fn measure_all(&self, pairs: &[PairKey]) -> Result<(Vec<PairMeasures>, Option<String>)> {
        let mut rows = pairs
            .par_iter()
            .map(|p| self.measure(p))
            .collect::<Result<Vec<_>>>()?;
        let diagnostic = normalize_rows(&mut rows);
        Ok((rows, diagnostic))
    }
}

/// Divides every `bm25_raw` by the largest one. Returns a diagnostic when
/// every score is zero and the division is skipped.
pub fn normalize_rows(rows: &mut [PairMeasures]) -> Option<String> {
    let raw: Vec<f64> = rows.iter().map(|r| r.bm25_raw).collect();
    let (norm, diagnostic) = normalize_bm25(&raw);
    for (row, n) in rows.iter_mut().zip(norm) {
        row.bm25_normalized = n;
    }
    diagnostic
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AuthorName, BibRecord};

    fn record(id: &str, title: &str, authors: &[(&str, &str)], refs: &[&str], year: i32) -> BibRecord {
        BibRecord {
            record_id: id.into(),
            title: title.into(),
            abstract_text: String::new(),
            authors: authors.iter().map(|(s, g)| AuthorName::new(*s, *g).unwrap()).collect(),
            journal_name: "X".into(),
            date: PubDate::year(year),
            volume: "1".into(),
            first_page: "1".into(),
            reference_keys: refs.iter().map(|r| RefKey::Raw(r.to_string())).collect(),
        }
    }

    #[test]
    fn measures_a_pair() {
        let index = BibIndex::new(vec![
            record("a", "gene regulation network", &[("Lee", "K.")], &["r1", "r2"], 2010),
            record("b", "gene expression", &[("Lee", "Kim")], &["r2"], 2012),
            record("c", "protein folding", &[], &[], 2012),
            record("d", "cell division", &[], &[], 2012),
            record("e", "ion channels", &[], &[], 2012),
        ])
        .unwrap();
        let universe: BTreeSet<RecordId> = ["a", "b", "c", "d", "e"].into_iter().map(RecordId::from).collect();
        let ctx = MeasureContext::new(&index, &universe, Bm25Params::default(), AuthorMatching::Greedy).unwrap();
        let ab = PairKey::new(&"a".into(), &"b".into()).unwrap();
        let ac = PairKey::new(&"a".into(), &"c".into()).unwrap();
        let (rows, diag) = ctx.measure_all(&[ab, ac]).unwrap();
        assert!(diag.is_none());
        assert!(rows[0].bm25_raw > 0.0);
        assert_eq!(rows[0].bm25_normalized, 1.0);
        assert_eq!(rows[0].intellectual_overlap, Some(1.0));
        assert_eq!(rows[0].author_overlap, Some(1.0));
        assert_eq!(rows[0].time_distance_months, 24);
        assert_eq!(rows[1].bm25_raw, 0.0);
        assert_eq!(rows[1].intellectual_overlap, None);
        assert_eq!(rows[1].author_overlap, None);
    }

    #[test]
    fn unknown_record_is_an_error() {
        let index = BibIndex::new(vec![record("a", "xylophone", &[], &[], 2010)]).unwrap();
        let universe: BTreeSet<RecordId> = [RecordId::from("a")].into();
        let ctx = MeasureContext::new(&index, &universe, Bm25Params::default(), AuthorMatching::Exact).unwrap();
        let p = PairKey::new(&"a".into(), &"z".into()).unwrap();
        assert!(ctx.measure(&p).is_err());
    }
}
