//! Full-text parsing: corpus documents into [`Document`]s whose in-text
//! citations carry their section, paragraph, sentence and bracket.
//!
//! Only main sections get a section index; subsections of any depth fold
//! into their top-level section. Paragraph, sentence and bracket indices are
//! dense and document-global in reading order. Headings, titles and
//! abstracts are never scanned for citations. Footnote, caption and other
//! blocks keep their citations (with indices) but those are excluded from
//! pair extraction through their [`LocationKind`].

mod brackets;
pub mod jats;
mod sentences;

use std::collections::HashSet;

pub use brackets::{bracket_regions, group_brackets, separator_only, Region};
pub use sentences::{split_sentences, Abbreviations};

use crate::error::{Error, Result};
use crate::format::{BlockKind, RawDocument, RawSection};
use crate::matcher::normalize_reference;
use crate::model::{
    AuthorName, Document, InTextCitation, LocationKind, PubDate, ReferenceEntry, StructuralLocus,
};

/// One paragraph-level block with its citation anchors (char offsets,
/// sorted ascending).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParagraphBlock {
    pub section_index: usize,
    pub kind: LocationKind,
    pub text: String,
    pub citation_anchors: Vec<(String, usize)>,
}

/// Half-open char range `[start, end)` of one sentence within a paragraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceSpan {
    pub start: usize,
    pub end: usize,
}

fn location_kind(kind: BlockKind) -> LocationKind {
    match kind {
        BlockKind::Body | BlockKind::ListItem => LocationKind::Body,
        BlockKind::Footnote => LocationKind::Footnote,
        BlockKind::Caption => LocationKind::Caption,
        BlockKind::Other => LocationKind::Other,
    }
}

fn parse_err(doc: &RawDocument, location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        doc_id: doc.doc_id.clone(),
        location: location.into(),
        message: message.into(),
    }
}

/// Flattens a main section and all of its subsections into `out`.
fn collect_blocks(
    raw: &RawDocument,
    section: &RawSection,
    section_index: usize,
    path: &str,
    declared: &HashSet<&str>,
    out: &mut Vec<ParagraphBlock>,
) -> Result<()> {
    for (b, block) in section.blocks.iter().enumerate() {
        let len = block.text.chars().count();
        let mut anchors = Vec::with_capacity(block.anchors.len());
        for (a, anchor) in block.anchors.iter().enumerate() {
            let location = format!("{path}.blocks[{b}].anchors[{a}]");
            if !declared.contains(anchor.ref_id.as_str()) {
                return Err(Error::Integrity {
                    doc_id: raw.doc_id.clone(),
                    ref_id: anchor.ref_id.clone(),
                    location,
                });
            }
            if anchor.offset >= len {
                return Err(parse_err(
                    raw,
                    location,
                    format!("offset {} outside text of length {len}", anchor.offset),
                ));
            }
            anchors.push((anchor.ref_id.clone(), anchor.offset));
        }
        anchors.sort_by_key(|a| a.1);
        out.push(ParagraphBlock {
            section_index,
            kind: location_kind(block.kind),
            text: block.text.clone(),
            citation_anchors: anchors,
        });
    }
    for (s, sub) in section.subsections.iter().enumerate() {
        let sub_path = format!("{path}.subsections[{s}]");
        collect_blocks(raw, sub, section_index, &sub_path, declared, out)?;
    }
    Ok(())
}

/// Gives every anchor its document-global locus. `spans` and `groups` are
/// per block, as produced by the splitter and [`group_brackets`].
pub fn assign_loci(
    blocks: &[ParagraphBlock],
    spans: &[Vec<SentenceSpan>],
    groups: &[Vec<usize>],
) -> Result<Vec<InTextCitation>> {
    let mut citations = Vec::new();
    let mut sentence_base = 0;
    let mut bracket_base = 0;
    for (p, block) in blocks.iter().enumerate() {
        let block_spans = &spans[p];
        let block_groups = &groups[p];
        for ((ref_id, offset), group) in block.citation_anchors.iter().zip(block_groups) {
            let sentence = block_spans
                .iter()
                .position(|s| s.start <= *offset && *offset < s.end)
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "anchor {ref_id} at {offset} lies outside every sentence span"
                    ))
                })?;
            citations.push(InTextCitation {
                ref_id: ref_id.clone(),
                locus: StructuralLocus {
                    section_index: block.section_index,
                    paragraph_index: p,
                    sentence_index: sentence_base + sentence,
                    bracket_index: bracket_base + group,
                    location_kind: block.kind,
                },
            });
        }
        sentence_base += block_spans.len();
        bracket_base += block_groups.last().map_or(0, |g| g + 1);
    }
    Ok(citations)
}

/// Parses one corpus document with the given abbreviation list.
pub fn parse_document(raw: &RawDocument, abbreviations: &Abbreviations) -> Result<Document> {
    if raw.doc_id.trim().is_empty() {
        return Err(parse_err(raw, "doc_id", "empty document id"));
    }
    let date = PubDate::new(raw.year, raw.month, raw.season)
        .map_err(|e| parse_err(raw, "date", e.to_string()))?;
    let authors = raw
        .authors
        .iter()
        .enumerate()
        .map(|(i, a)| {
            AuthorName::new(a.surname.clone(), a.given.clone())
                .map_err(|e| parse_err(raw, format!("authors[{i}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut declared = HashSet::new();
    let mut references = Vec::with_capacity(raw.references.len());
    for (i, r) in raw.references.iter().enumerate() {
        if !declared.insert(r.ref_id.as_str()) {
            return Err(parse_err(
                raw,
                format!("references[{i}]"),
                format!("duplicate ref_id {:?}", r.ref_id),
            ));
        }
        references.push(ReferenceEntry {
            ref_id: r.ref_id.clone(),
            raw: r.raw.clone(),
            year: r.year,
            key: normalize_reference(
                r.surname.as_deref(),
                r.given.as_deref(),
                r.year,
                r.volume.as_deref(),
                r.first_page.as_deref(),
            ),
        });
    }

    let mut blocks = Vec::new();
    for (s, section) in raw.sections.iter().enumerate() {
        collect_blocks(raw, section, s, &format!("sections[{s}]"), &declared, &mut blocks)?;
    }

    let spans: Vec<Vec<SentenceSpan>> = blocks
        .iter()
        .map(|b| abbreviations.split(&b.text))
        .collect();
    let groups: Vec<Vec<usize>> = blocks
        .iter()
        .zip(&spans)
        .map(|(b, s)| group_brackets(b, s))
        .collect();
    let citations = assign_loci(&blocks, &spans, &groups)?;

    Ok(Document {
        doc_id: raw.doc_id.clone(),
        journal_name: raw.journal.clone(),
        date,
        article_type: raw.article_type,
        title: raw.title.clone(),
        abstract_text: raw.abstract_text.clone(),
        authors,
        references,
        citations,
    })
}
