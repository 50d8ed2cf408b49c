//! Reference normalization, resolution against the bibliographic index, and
//! the author-name matching rule.

use std::collections::{HashMap, HashSet};

use log::warn;

use crate::error::{Error, Result};
use crate::format::RawBibRecord;
use crate::matching::max_bipartite_matching;
use crate::model::{AuthorName, BibRecord, Document, MatchKey, PubDate, RecordId, RefKey};

/// Trims and strips leading zeros from a volume or page field. An all-zero
/// field collapses to "0".
pub fn normalize_number_field(s: &str) -> String {
    let t = s.trim();
    if t.is_empty() {
        return String::new();
    }
    let stripped = t.trim_start_matches('0');
    if stripped.is_empty() {
        "0".to_string()
    } else {
        stripped.to_string()
    }
}

/// Builds a match key from raw reference fields; `None` when any of first
/// author, year, volume or first page is missing or empty.
pub fn normalize_reference(
    surname: Option<&str>,
    given: Option<&str>,
    year: Option<i32>,
    volume: Option<&str>,
    first_page: Option<&str>,
) -> Option<MatchKey> {
    let surname = surname?.trim().to_lowercase();
    if surname.is_empty() {
        return None;
    }
    let initial = given?
        .chars()
        .find(|c| c.is_alphabetic())?
        .to_lowercase()
        .next()?;
    let volume = normalize_number_field(volume?);
    let first_page = normalize_number_field(first_page?);
    if volume.is_empty() || first_page.is_empty() {
        return None;
    }
    Some(MatchKey {
        first_author_surname: surname,
        first_author_initial: initial,
        year: year?,
        volume,
        first_page,
    })
}

/// Re-applies normalization to an existing key. Identity on keys produced by
/// [`normalize_reference`].
pub fn renormalize(key: &MatchKey) -> Option<MatchKey> {
    let given = key.first_author_initial.to_string();
    normalize_reference(
        Some(&key.first_author_surname),
        Some(&given),
        Some(key.year),
        Some(&key.volume),
        Some(&key.first_page),
    )
}

/// Lowercases and collapses whitespace.
pub fn normalize_raw(raw: &str) -> String {
    raw.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses a cited-reference string in the compact index style
/// `Surname IN, 2010, SOURCE, V14, P265`. Anything that does not yield all
/// match fields falls back to the normalized raw string.
pub fn parse_cited_reference(raw: &str) -> RefKey {
    match parse_compact(raw) {
        Some(key) => RefKey::Key(key),
        None => RefKey::Raw(normalize_raw(raw)),
    }
}

fn parse_compact(raw: &str) -> Option<MatchKey> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() < 4 {
        return None;
    }
    let (surname, initials) = parts[0].rsplit_once(char::is_whitespace)?;
    if !initials.chars().all(|c| c.is_alphabetic() && c.is_uppercase()) {
        return None;
    }
    let year: i32 = parts[1].parse().ok()?;
    let field = |prefix: char| {
        parts[2..].iter().find_map(|p| {
            let mut chars = p.chars();
            (chars.next()? == prefix)
                .then_some(chars.as_str())
                .filter(|rest| !rest.is_empty() && rest.chars().all(char::is_alphanumeric))
        })
    };
    normalize_reference(
        Some(surname),
        Some(initials),
        Some(year),
        field('V'),
        field('P'),
    )
}

/// Read-only bibliographic index keyed by record id and match key.
#[derive(Debug, Clone, Default)]
pub struct BibIndex {
    records: Vec<BibRecord>,
    by_id: HashMap<RecordId, usize>,
    by_key: HashMap<MatchKey, Vec<usize>>,
}

impl BibIndex {
    pub fn new(records: Vec<BibRecord>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(records.len());
        let mut by_key: HashMap<MatchKey, Vec<usize>> = HashMap::new();
        for (i, rec) in records.iter().enumerate() {
            if by_id.insert(rec.record_id.clone(), i).is_some() {
                return Err(Error::DuplicateId(rec.record_id.0.clone()));
            }
            if let Some(key) = record_key(rec) {
                by_key.entry(key).or_default().push(i);
            }
        }
        Ok(BibIndex {
            records,
            by_id,
            by_key,
        })
    }

    pub fn from_raw(raw: &[RawBibRecord]) -> Result<Self> {
        let records = raw.iter().map(bib_record_from_raw).collect::<Result<Vec<_>>>()?;
        Self::new(records)
    }

    pub fn records(&self) -> &[BibRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &RecordId) -> Option<&BibRecord> {
        self.by_id.get(id).map(|&i| &self.records[i])
    }

    pub fn lookup(&self, key: &MatchKey) -> &[usize] {
        self.by_key.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Keys shared by more than one record.
    pub fn key_collisions(&self) -> Vec<(MatchKey, Vec<RecordId>)> {
        let mut out: Vec<_> = self
            .by_key
            .iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(k, v)| {
                let mut ids: Vec<RecordId> =
                    v.iter().map(|&i| self.records[i].record_id.clone()).collect();
                ids.sort();
                (k.clone(), ids)
            })
            .collect();
        out.sort();
        out
    }
}

pub fn record_key(rec: &BibRecord) -> Option<MatchKey> {
    let first = rec.authors.first()?;
    normalize_reference(
        Some(&first.surname),
        Some(&first.given),
        Some(rec.date.year),
        Some(&rec.volume),
        Some(&rec.first_page),
    )
}

pub fn bib_record_from_raw(raw: &RawBibRecord) -> Result<BibRecord> {
    let date = PubDate::new(raw.year, raw.month, raw.season)
        .map_err(|e| Error::InvalidDate(format!("record {}: {e}", raw.record_id)))?;
    let authors = raw
        .authors
        .iter()
        .map(|a| AuthorName::new(a.surname.clone(), a.given.clone()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidAuthor(format!("record {}: {e}", raw.record_id)))?;
    Ok(BibRecord {
        record_id: RecordId(raw.record_id.clone()),
        title: raw.title.clone(),
        abstract_text: raw.abstract_text.clone(),
        authors,
        journal_name: raw.journal.clone(),
        date,
        volume: raw.volume.clone(),
        first_page: raw.first_page.clone(),
        reference_keys: raw.references.iter().map(|r| parse_cited_reference(r)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collision {
    pub doc_id: String,
    pub ref_id: String,
    pub key: MatchKey,
    pub records: Vec<RecordId>,
}

/// Resolution of one document's reference list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceMatches {
    map: HashMap<String, RecordId>,
    pub collisions: Vec<Collision>,
}

impl ReferenceMatches {
    pub fn get(&self, ref_id: &str) -> Option<&RecordId> {
        self.map.get(ref_id)
    }

    pub fn matched_count(&self) -> usize {
        self.map.len()
    }

    /// Distinct matched records.
    pub fn records(&self) -> HashSet<&RecordId> {
        self.map.values().collect()
    }
}

/// A reference matches iff its key equals exactly one record's key.
/// Ambiguous keys are reported and left unmatched.
pub fn match_references(doc: &Document, index: &BibIndex) -> ReferenceMatches {
    let mut out = ReferenceMatches::default();
    for r in &doc.references {
        let Some(key) = &r.key else { continue };
        match index.lookup(key) {
            [] => {}
            [only] => {
                out.map
                    .insert(r.ref_id.clone(), index.records[*only].record_id.clone());
            }
            many => {
                let mut records: Vec<RecordId> = many
                    .iter()
                    .map(|&i| index.records[i].record_id.clone())
                    .collect();
                records.sort();
                warn!(
                    "document {}: reference {} key {} matches {} records; skipped",
                    doc.doc_id,
                    r.ref_id,
                    key,
                    records.len()
                );
                out.collisions.push(Collision {
                    doc_id: doc.doc_id.clone(),
                    ref_id: r.ref_id.clone(),
                    key: key.clone(),
                    records,
                });
            }
        }
    }
    out
}

fn name_components(given: &str) -> Vec<String> {
    given
        .split(|c: char| c.is_whitespace() || c == '.' || c == '-')
        .filter(|s| !s.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn components_match(x: &str, y: &str) -> bool {
    let initial = |s: &str| s.chars().count() == 1;
    if initial(x) || initial(y) {
        x.chars().next() == y.chars().next()
    } else {
        x == y
    }
}

/// An author mention lowercased and split into given-name components, ready
/// for repeated comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedName {
    surname: String,
    components: Vec<String>,
}

impl From<&AuthorName> for NormalizedName {
    fn from(a: &AuthorName) -> Self {
        NormalizedName {
            surname: a.surname.trim().to_lowercase(),
            components: name_components(&a.given),
        }
    }
}

impl NormalizedName {
    pub fn matches(&self, other: &NormalizedName) -> bool {
        if self.surname != other.surname {
            return false;
        }
        let (short, long) = if self.components.len() <= other.components.len() {
            (&self.components, &other.components)
        } else {
            (&other.components, &self.components)
        };
        // The component relation is symmetric, so with equal counts either
        // side may play "shorter" with the same outcome.
        max_bipartite_matching(short.len(), long.len(), |i, j| {
            components_match(&short[i], &long[j])
        }) == short.len()
    }
}

/// Two mentions name the same author when the lowercase surnames are equal
/// and every given-name component of the shorter string is matched, each to
/// a distinct component of the longer one. An initial matches any component
/// with the same first letter.
pub fn match_author_names(a: &AuthorName, b: &AuthorName) -> bool {
    NormalizedName::from(a).matches(&NormalizedName::from(b))
}
