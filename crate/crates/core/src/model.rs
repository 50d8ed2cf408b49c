//! Shared domain types for citing documents, cited records, structural loci
//! and co-cited pairs.
//!
//! Everything here is plain data. Values are immutable once built and are
//! `Send + Sync`, so parsed corpora can be shared freely across workers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque identifier of a record in the bibliographic index.
///
/// Ordering is lexicographic over the identifier bytes and is the canonical
/// order used for pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecordId(pub String);

impl RecordId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RecordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for RecordId {
    fn from(s: &str) -> Self {
        RecordId(s.to_string())
    }
}

impl From<String> for RecordId {
    fn from(s: String) -> Self {
        RecordId(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AuthorName {
    pub surname: String,
    /// Full given-name string; may hold initials separated by spaces or periods.
    #[serde(default)]
    pub given: String,
}

impl AuthorName {
    pub fn new(surname: impl Into<String>, given: impl Into<String>) -> Result<Self> {
        let surname = surname.into();
        if surname.trim().is_empty() {
            return Err(Error::InvalidAuthor("surname is empty".into()));
        }
        Ok(AuthorName {
            surname,
            given: given.into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Season {
    Spring,
    Summer,
    Autumn,
    Winter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PubDate {
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub month: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub season: Option<Season>,
}

impl PubDate {
    pub fn year(year: i32) -> Self {
        PubDate {
            year,
            month: None,
            season: None,
        }
    }

    pub fn with_month(year: i32, month: u8) -> Result<Self> {
        Self::new(year, Some(month), None)
    }

    pub fn with_season(year: i32, season: Season) -> Self {
        PubDate {
            year,
            month: None,
            season: Some(season),
        }
    }

    pub fn new(year: i32, month: Option<u8>, season: Option<Season>) -> Result<Self> {
        if month.is_some() && season.is_some() {
            return Err(Error::InvalidDate(format!(
                "{year}: both month and season given"
            )));
        }
        if let Some(m) = month {
            if !(1..=12).contains(&m) {
                return Err(Error::InvalidDate(format!("{year}: month {m} out of range")));
            }
        }
        Ok(PubDate {
            year,
            month,
            season,
        })
    }
}

/// Normalized (first author surname, first initial, year, volume, first page)
/// tuple used to resolve references against the index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MatchKey {
    pub first_author_surname: String,
    pub first_author_initial: char,
    pub year: i32,
    pub volume: String,
    pub first_page: String,
}

impl fmt::Display for MatchKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}, {}, v{}, p{}",
            self.first_author_surname,
            self.first_author_initial,
            self.year,
            self.volume,
            self.first_page
        )
    }
}

/// Identity of one entry in a record's own reference list, used for
/// bibliographic coupling. Parsed references compare on their match key,
/// everything else on the whitespace/case-normalized raw string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefKey {
    Key(MatchKey),
    Raw(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BibRecord {
    pub record_id: RecordId,
    pub title: String,
    pub abstract_text: String,
    pub authors: Vec<AuthorName>,
    pub journal_name: String,
    pub date: PubDate,
    pub volume: String,
    pub first_page: String,
    pub reference_keys: Vec<RefKey>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationKind {
    Body,
    Footnote,
    Caption,
    Other,
}

/// Position of one in-text citation. Paragraph, sentence and bracket indices
/// are document-global, so "same paragraph" is plain integer equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructuralLocus {
    pub section_index: usize,
    pub paragraph_index: usize,
    pub sentence_index: usize,
    pub bracket_index: usize,
    pub location_kind: LocationKind,
}

impl StructuralLocus {
    /// The most specific level shared by two loci of the same document.
    pub fn shared_level(&self, other: &StructuralLocus) -> Level {
        if self.bracket_index == other.bracket_index {
            Level::Bracket
        } else if self.sentence_index == other.sentence_index {
            Level::Sentence
        } else if self.paragraph_index == other.paragraph_index {
            Level::Paragraph
        } else if self.section_index == other.section_index {
            Level::Section
        } else {
            Level::Article
        }
    }

    /// Containment consistency between two loci of one document.
    pub fn consistent_with(&self, other: &StructuralLocus) -> bool {
        (self.bracket_index != other.bracket_index
            || self.sentence_index == other.sentence_index)
            && (self.sentence_index != other.sentence_index
                || self.paragraph_index == other.paragraph_index)
            && (self.paragraph_index != other.paragraph_index
                || self.section_index == other.section_index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InTextCitation {
    pub ref_id: String,
    pub locus: StructuralLocus,
}

impl InTextCitation {
    /// Only body citations take part in pair extraction.
    pub fn is_analyzed(&self) -> bool {
        self.locus.location_kind == LocationKind::Body
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArticleType {
    Research,
    ShortCommunication,
    Review,
    #[serde(other)]
    Other,
}

impl ArticleType {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArticleType::Research => "research",
            ArticleType::ShortCommunication => "short_communication",
            ArticleType::Review => "review",
            ArticleType::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub ref_id: String,
    pub raw: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    /// `None` when the entry lacks one of the match fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<MatchKey>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub journal_name: String,
    pub date: PubDate,
    pub article_type: ArticleType,
    pub title: String,
    pub abstract_text: String,
    pub authors: Vec<AuthorName>,
    pub references: Vec<ReferenceEntry>,
    pub citations: Vec<InTextCitation>,
}

impl Document {
    pub fn reference(&self, ref_id: &str) -> Option<&ReferenceEntry> {
        self.references.iter().find(|r| r.ref_id == ref_id)
    }

    /// Returns the first pair of citations violating locus containment, if any.
    pub fn containment_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.citations.len() {
            for j in i + 1..self.citations.len() {
                if !self.citations[i]
                    .locus
                    .consistent_with(&self.citations[j].locus)
                {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Co-citation levels ordered from least to most specific, so that `max`
/// picks the lowest (most detailed) level.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Journal,
    Article,
    Section,
    Paragraph,
    Sentence,
    Bracket,
}

impl Level {
    pub const ALL: [Level; 6] = [
        Level::Journal,
        Level::Article,
        Level::Section,
        Level::Paragraph,
        Level::Sentence,
        Level::Bracket,
    ];

    /// The five levels derived from full text, article through bracket.
    pub const IN_ARTICLE: [Level; 5] = [
        Level::Article,
        Level::Section,
        Level::Paragraph,
        Level::Sentence,
        Level::Bracket,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Level::Journal => "journal",
            Level::Article => "article",
            Level::Section => "section",
            Level::Paragraph => "paragraph",
            Level::Sentence => "sentence",
            Level::Bracket => "bracket",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.as_str() == s)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Orders two record ids canonically (lexicographic bytes).
pub fn canonicalize_pair(x: &RecordId, y: &RecordId) -> Result<(RecordId, RecordId)> {
    match x.cmp(y) {
        std::cmp::Ordering::Less => Ok((x.clone(), y.clone())),
        std::cmp::Ordering::Greater => Ok((y.clone(), x.clone())),
        std::cmp::Ordering::Equal => Err(Error::SelfPair(x.0.clone())),
    }
}

/// Unordered pair of distinct records, stored in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairKey {
    pub id_a: RecordId,
    pub id_b: RecordId,
}

impl PairKey {
    pub fn new(x: &RecordId, y: &RecordId) -> Result<Self> {
        let (id_a, id_b) = canonicalize_pair(x, y)?;
        Ok(PairKey { id_a, id_b })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoCitedPair {
    pub pair: PairKey,
    pub lowest_level: Level,
    pub journal_name: String,
}

/// The four similarity values of one pair. `None` marks a measure that is
/// undefined for the pair (empty reference or author list).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMeasures {
    pub bm25_raw: f64,
    pub bm25_normalized: f64,
    pub intellectual_overlap: Option<f64>,
    pub author_overlap: Option<f64>,
    pub time_distance_months: u32,
}
