//! Synthetic corpora with planted structure.
//!
//! Cited records live in a tree: topic, subtopic, group, cluster. Records
//! that share deeper nodes share more vocabulary, authors and references and
//! were published closer in time. Citing documents mirror the tree in their
//! layout: a section cites within one topic, a paragraph within one subtopic,
//! a sentence within one group and a bracket within one cluster. Pairs that
//! are co-cited closer together are therefore more similar on every measure.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::format::{
    BlockKind, RawAnchor, RawAuthor, RawBibRecord, RawBlock, RawDocument, RawReference, RawSection,
};
use crate::model::{ArticleType, Season};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub journals: Vec<String>,
    /// Citing documents, spread round-robin over the journals.
    pub documents: usize,
    pub topics: usize,
    pub subtopics: usize,
    pub groups: usize,
    pub clusters: usize,
    pub records_per_cluster: usize,
    pub sections: usize,
    pub paragraphs: usize,
    pub sentences: usize,
    pub brackets: usize,
    pub citing_years: (i32, i32),
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            journals: vec!["Synthetic Letters".to_string()],
            documents: 100,
            topics: 12,
            subtopics: 4,
            groups: 3,
            clusters: 3,
            records_per_cluster: 5,
            sections: 3,
            paragraphs: 3,
            sentences: 2,
            brackets: 2,
            citing_years: (2010, 2014),
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub documents: Vec<RawDocument>,
    pub index: Vec<RawBibRecord>,
}

const SYLLABLES: [&str; 16] = [
    "ka", "lo", "mi", "ne", "ru", "ta", "zi", "po", "se", "du", "fa", "gu", "he", "jo", "vi", "be",
];

/// Distinct pseudo-word for `n`, prefixed so that different vocabularies
/// never collide.
fn word(prefix: &str, mut n: usize) -> String {
    let mut w = prefix.to_string();
    loop {
        w.push_str(SYLLABLES[n % SYLLABLES.len()]);
        n /= SYLLABLES.len();
        if n == 0 {
            break w;
        }
    }
}

fn capitalized(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Path of a node in the tree, one index per depth below the root.
type Path = [usize; 4];

struct Tree {
    cfg: SynthConfig,
}

impl Tree {
    /// Unique id of the node at `depth` (0 = topic .. 3 = cluster).
    fn node_id(&self, p: &Path, depth: usize) -> usize {
        let widths = [self.cfg.subtopics, self.cfg.groups, self.cfg.clusters];
        let mut id = p[0];
        for d in 1..=depth {
            id = id * widths[d - 1] + p[d];
        }
        id
    }

    fn cluster_count(&self) -> usize {
        self.cfg.topics * self.cfg.subtopics * self.cfg.groups * self.cfg.clusters
    }

    fn path_of_cluster(&self, mut c: usize) -> Path {
        let k = c % self.cfg.clusters;
        c /= self.cfg.clusters;
        let g = c % self.cfg.groups;
        c /= self.cfg.groups;
        let s = c % self.cfg.subtopics;
        [c / self.cfg.subtopics, s, g, k]
    }

    fn record_index(&self, p: &Path, r: usize) -> usize {
        self.node_id(p, 3) * self.cfg.records_per_cluster + r
    }

    /// Base publication year of a node; children drift from their parent.
    fn year(&self, p: &Path, depth: usize) -> i32 {
        let mut y = 1997 + (self.node_id(p, 0) * 7 % 11) as i32;
        let spread = [3, 2, 1];
        for d in 1..=depth {
            let h = rng::derive_seed(self.cfg.seed, &format!("year/{d}/{}", self.node_id(p, d)));
            let s = spread[d - 1];
            y += (h % (2 * s as u64 + 1)) as i32 - s;
        }
        y
    }
}

/// Draws the tree depth a feature comes from: 3 = cluster .. 0 = topic,
/// `None` = corpus-wide background.
fn depth_draw(rng: &mut ChaCha8Rng, weights: [f64; 5]) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return (i < 4).then(|| 3 - i);
        }
        x -= w;
    }
    None
}

fn author_of(tree: &Tree, rng: &mut ChaCha8Rng, p: &Path) -> (String, String) {
    let pool_sizes = [5, 4, 3, 3];
    let id = match depth_draw(rng, [0.35, 0.2, 0.15, 0.1, 0.2]) {
        Some(d) => {
            let k = rng.gen_range(0..pool_sizes[d]);
            ((d + 1) * 1_000_000) + tree.node_id(p, d) * 8 + k
        }
        None => rng.gen_range(0..5000),
    };
    let surname = capitalized(&word("", id + 4096));
    let first = word("", id % 251 + 17);
    let given = match id % 3 {
        0 => format!("{}.", first.chars().next().unwrap().to_ascii_uppercase()),
        1 => capitalized(&first),
        _ => format!("{}. {}.", first.chars().next().unwrap().to_ascii_uppercase(), "M"),
    };
    (surname, given)
}

fn background_reference(tree: &Tree, rng: &mut ChaCha8Rng, p: &Path) -> String {
    let pool_sizes = [12, 10, 8, 6];
    let id = match depth_draw(rng, [0.35, 0.25, 0.15, 0.1, 0.15]) {
        Some(d) => {
            let k = rng.gen_range(0..pool_sizes[d]);
            ((d + 1) * 1_000_000) + tree.node_id(p, d) * 16 + k
        }
        None => rng.gen_range(0..20_000),
    };
    if id % 97 == 0 {
        return format!("Unpublished data, item {id}");
    }
    format!(
        "{} {}, {}, {}, V{}, P{}",
        capitalized(&word("", id + 9000)),
        (b'A' + (id % 26) as u8) as char,
        1970 + (id % 30),
        word("j", id % 40).to_uppercase(),
        id % 300 + 1,
        id % 997 + 1
    )
}

fn make_record(tree: &Tree, p: &Path, r: usize) -> RawBibRecord {
    let idx = tree.record_index(p, r);
    let mut rng = rng::stream(tree.cfg.seed, &format!("record/{idx}"));
    let vocab = [6, 8, 10, 12];
    let mut tokens = Vec::new();
    for _ in 0..26 {
        let w = match depth_draw(&mut rng, [0.22, 0.18, 0.14, 0.1, 0.36]) {
            Some(d) => word(["t", "s", "g", "c"][d], tree.node_id(p, d) * 16 + rng.gen_range(0..vocab[d])),
            None => word("b", rng.gen_range(0..400)),
        };
        tokens.push(w);
    }
    let title = capitalized(&tokens[..6].join(" "));
    let abstract_text = format!("{}.", capitalized(&tokens[6..].join(" ")));

    let mut authors: Vec<RawAuthor> = Vec::new();
    let n_authors = rng.gen_range(1..=5);
    while authors.len() < n_authors {
        let (surname, given) = author_of(tree, &mut rng, p);
        if authors.iter().all(|a| a.surname != surname) {
            authors.push(RawAuthor { surname, given });
        }
    }

    let references: Vec<String> = if rng.gen_bool(0.05) {
        Vec::new()
    } else {
        let n = rng.gen_range(10..=30);
        let set: BTreeSet<String> = (0..n).map(|_| background_reference(tree, &mut rng, p)).collect();
        set.into_iter().collect()
    };

    let year = (tree.year(p, 3) + rng.gen_range(-1..=1)).clamp(1990, tree.cfg.citing_years.0 - 1);
    let (month, season) = match rng.gen_range(0..10) {
        0 => (None, None),
        1 => (None, Some([Season::Spring, Season::Summer, Season::Autumn, Season::Winter][rng.gen_range(0..4)])),
        _ => (Some(rng.gen_range(1..=12u8)), None),
    };
    RawBibRecord {
        record_id: format!("R{idx:06}"),
        title,
        abstract_text,
        authors: authors.clone(),
        journal: word("", idx % 30 + 300).to_uppercase(),
        year,
        month,
        season,
        volume: (idx % 250 + 1).to_string(),
        first_page: (idx * 7 % 2000 + 1).to_string(),
        references,
    }
}

const FILLER: [&str; 24] = [
    "results", "suggest", "that", "the", "observed", "effect", "depends", "on", "prior", "work",
    "model", "data", "show", "a", "similar", "pattern", "was", "reported", "in", "studies",
    "strong", "evidence", "supports", "this",
];

fn filler(rng: &mut ChaCha8Rng, n: usize) -> Vec<&'static str> {
    (0..n).map(|_| FILLER[rng.gen_range(0..FILLER.len())]).collect()
}

struct DocBuilder<'a> {
    index: &'a [RawBibRecord],
    /// Record index per reference number (1-based numbers = position + 1).
    cited: Vec<usize>,
}

impl DocBuilder<'_> {
    fn number(&mut self, record: usize) -> usize {
        match self.cited.iter().position(|&r| r == record) {
            Some(i) => i + 1,
            None => {
                self.cited.push(record);
                self.cited.len()
            }
        }
    }

    fn reference(&self, number: usize) -> RawReference {
        let rec = &self.index[self.cited[number - 1]];
        let first = rec.authors.first();
        RawReference {
            ref_id: format!("b{number}"),
            raw: format!("{}. {}.", rec.authors.iter().map(|a| a.surname.as_str()).collect::<Vec<_>>().join(", "), rec.title),
            surname: first.map(|a| a.surname.clone()),
            given: first.map(|a| a.given.clone()),
            year: Some(rec.year),
            volume: Some(rec.volume.clone()),
            first_page: Some(rec.first_page.clone()),
        }
    }
}

fn make_document(tree: &Tree, records: &[RawBibRecord], d: usize) -> RawDocument {
    let cfg = &tree.cfg;
    let mut rng = rng::stream(cfg.seed, &format!("document/{d}"));
    let journal = cfg.journals[d % cfg.journals.len()].clone();
    let mut b = DocBuilder { index: records, cited: Vec::new() };
    let primary = rng.gen_range(0..cfg.topics);

    let mut sections = Vec::new();
    for s in 0..cfg.sections {
        let topic = if rng.gen_bool(0.5) { primary } else { rng.gen_range(0..cfg.topics) };
        let mut blocks = Vec::new();
        for _ in 0..cfg.paragraphs {
            let sub = rng.gen_range(0..cfg.subtopics);
            let mut text = String::new();
            let mut anchors = Vec::new();
            for _ in 0..cfg.sentences {
                let group = rng.gen_range(0..cfg.groups);
                let words = filler(&mut rng, 4);
                text.push_str(&capitalized(&words.join(" ")));
                for k in 0..cfg.brackets {
                    let path = [topic, sub, group, rng.gen_range(0..cfg.clusters)];
                    let size = rng.gen_range(1..=2).min(cfg.records_per_cluster);
                    let mut members: Vec<usize> = (0..cfg.records_per_cluster).collect();
                    members.shuffle(&mut rng);
                    if k > 0 {
                        text.push_str(" and ");
                        text.push_str(&filler(&mut rng, 2).join(" "));
                    }
                    text.push_str(" [");
                    for (j, &m) in members[..size].iter().enumerate() {
                        if j > 0 {
                            text.push_str(", ");
                        }
                        let n = b.number(tree.record_index(&path, m));
                        anchors.push(RawAnchor {
                            ref_id: format!("b{n}"),
                            offset: text.chars().count(),
                        });
                        text.push_str(&n.to_string());
                    }
                    text.push(']');
                }
                text.push_str(". ");
            }
            blocks.push(RawBlock { kind: BlockKind::Body, text: text.trim_end().to_string(), anchors });
        }
        sections.push(RawSection {
            heading: format!("Section {}", s + 1),
            blocks,
            subsections: Vec::new(),
        });
    }

    // a few references cited only outside the body, or not at all
    let extra = rng.gen_range(0..records.len());
    let n_extra = b.number(extra);
    let caption = format!("Figure 1. Overview adapted from [{n_extra}].");
    let offset = caption.chars().position(|c| c == '[').unwrap_or(0) + 1;
    sections.push(RawSection {
        heading: "Figures".to_string(),
        blocks: vec![RawBlock {
            kind: BlockKind::Caption,
            text: caption,
            anchors: vec![RawAnchor { ref_id: format!("b{n_extra}"), offset }],
        }],
        subsections: Vec::new(),
    });
    b.number(rng.gen_range(0..records.len()));

    let mut references: Vec<RawReference> = (1..=b.cited.len()).map(|n| b.reference(n)).collect();
    references.push(RawReference {
        ref_id: format!("b{}", references.len() + 1),
        raw: "Personal communication.".to_string(),
        surname: None,
        given: None,
        year: None,
        volume: None,
        first_page: None,
    });

    let (y0, y1) = cfg.citing_years;
    let article_type = match rng.gen_range(0..20) {
        0 => ArticleType::Review,
        1 => ArticleType::ShortCommunication,
        _ => ArticleType::Research,
    };
    let mut authors = Vec::new();
    for _ in 0..rng.gen_range(1..=6) {
        let (surname, given) = author_of(tree, &mut rng, &[primary, 0, 0, 0]);
        if authors.iter().all(|a: &RawAuthor| a.surname != surname) {
            authors.push(RawAuthor { surname, given });
        }
    }
    RawDocument {
        doc_id: format!("D{d:05}"),
        journal,
        year: rng.gen_range(y0..=y1),
        month: Some(rng.gen_range(1..=12)),
        season: None,
        article_type,
        title: capitalized(&filler(&mut rng, 6).join(" ")),
        abstract_text: capitalized(&filler(&mut rng, 20).join(" ")),
        authors,
        sections,
        references,
    }
}

/// Generates a corpus; the output is a pure function of the config.
pub fn generate(cfg: &SynthConfig) -> SynthCorpus {
    assert!(!cfg.journals.is_empty(), "at least one journal");
    let tree = Tree { cfg: cfg.clone() };
    let mut index = Vec::with_capacity(tree.cluster_count() * cfg.records_per_cluster);
    for c in 0..tree.cluster_count() {
        let p = tree.path_of_cluster(c);
        for r in 0..cfg.records_per_cluster {
            index.push(make_record(&tree, &p, r));
        }
    }
    let documents = (0..cfg.documents).map(|d| make_document(&tree, &index, d)).collect();
    SynthCorpus { documents, index }
}
