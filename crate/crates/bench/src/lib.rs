//! Shared fixtures for the benchmarks.

use cocite_core::matcher::{match_references, BibIndex, ReferenceMatches};
use cocite_core::model::Document;
use cocite_core::parser::{parse_document, Abbreviations};
use cocite_core::synth::{generate, SynthConfig, SynthCorpus};

pub struct Fixture {
    pub corpus: SynthCorpus,
    pub index: BibIndex,
    pub documents: Vec<Document>,
    pub matches: Vec<ReferenceMatches>,
}

/// A parsed and matched synthetic corpus of `documents` citing articles.
pub fn fixture(documents: usize) -> Fixture {
    let corpus = generate(&SynthConfig { documents, ..SynthConfig::default() });
    let index = BibIndex::from_raw(&corpus.index).expect("synthetic index is valid");
    let abbr = Abbreviations::default();
    let documents: Vec<Document> = corpus
        .documents
        .iter()
        .map(|d| parse_document(d, &abbr).expect("synthetic documents parse"))
        .collect();
    let matches = documents.iter().map(|d| match_references(d, &index)).collect();
    Fixture { corpus, index, documents, matches }
}

impl Fixture {
    pub fn pairs(&self) -> Vec<(&Document, &ReferenceMatches)> {
        self.documents.iter().zip(&self.matches).collect()
    }

    /// Body text of every paragraph, for sentence splitting benchmarks.
    pub fn paragraphs(&self) -> Vec<&str> {
        self.corpus
            .documents
            .iter()
            .flat_map(|d| &d.sections)
            .flat_map(|s| &s.blocks)
            .map(|b| b.text.as_str())
            .collect()
    }
}
