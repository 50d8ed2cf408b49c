//! Import adapter for a JATS-like XML subset.
//!
//! Recognized: `article@article-type`, `journal-title`, `article-id`,
//! `article-title`, `pub-date` (`year`, `month`, `season`), `contrib/name`,
//! `abstract`, `body` with nested `sec`/`title`/`p`, `xref@rid`, `fn`,
//! `fig`/`table-wrap` `caption`, `list-item`, and `ref-list/ref` with
//! `surname`, `given-names`, `year`, `volume`, `fpage`. Everything else is
//! read as plain text or skipped.

use std::collections::HashSet;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::format::{
    BlockKind, RawAnchor, RawAuthor, RawBlock, RawDocument, RawReference, RawSection,
};
use crate::model::{ArticleType, Season};

#[derive(Debug, Clone)]
enum Node {
    Element(Element),
    Text(String),
}

#[derive(Debug, Clone, Default)]
struct Element {
    name: String,
    attrs: Vec<(String, String)>,
    children: Vec<Node>,
}

impl Element {
    fn attr(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
    }

    fn child(&self, name: &str) -> Option<&Element> {
        self.elements().find(|e| e.name == name)
    }

    /// Depth-first search for the first descendant named `name`.
    fn find(&self, name: &str) -> Option<&Element> {
        for e in self.elements() {
            if e.name == name {
                return Some(e);
            }
            if let Some(found) = e.find(name) {
                return Some(found);
            }
        }
        None
    }

    fn find_all<'a>(&'a self, name: &str, out: &mut Vec<&'a Element>) {
        for e in self.elements() {
            if e.name == name {
                out.push(e);
            } else {
                e.find_all(name, out);
            }
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        collect_text(self, &mut s);
        normalize_space(&s)
    }
}

fn collect_text(e: &Element, out: &mut String) {
    for c in &e.children {
        match c {
            Node::Text(t) => out.push_str(t),
            Node::Element(child) => collect_text(child, out),
        }
    }
}

fn normalize_space(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn local_name(raw: &[u8]) -> String {
    let s = String::from_utf8_lossy(raw);
    match s.rsplit_once(':') {
        Some((_, local)) => local.to_string(),
        None => s.into_owned(),
    }
}

fn xml_err(e: impl std::fmt::Display, pos: u64) -> Error {
    Error::Xml(format!("at byte {pos}: {e}"))
}

fn parse_tree(xml: &str) -> Result<Element> {
    let mut reader = Reader::from_str(xml);
    let mut stack: Vec<Element> = vec![Element::default()];
    loop {
        let pos = reader.buffer_position();
        let event = reader.read_event().map_err(|e| xml_err(e, pos))?;
        match event {
            Event::Start(start) => stack.push(element_from(&start, pos)?),
            Event::Empty(start) => {
                let el = element_from(&start, pos)?;
                stack.last_mut().unwrap().children.push(Node::Element(el));
            }
            Event::End(_) => {
                if stack.len() < 2 {
                    return Err(xml_err("unbalanced end tag", pos));
                }
                let done = stack.pop().unwrap();
                stack.last_mut().unwrap().children.push(Node::Element(done));
            }
            Event::Text(t) => {
                let text = t.unescape().map_err(|e| xml_err(e, pos))?.into_owned();
                stack.last_mut().unwrap().children.push(Node::Text(text));
            }
            Event::CData(t) => {
                let text = String::from_utf8_lossy(&t.into_inner()).into_owned();
                stack.last_mut().unwrap().children.push(Node::Text(text));
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if stack.len() != 1 {
        return Err(Error::Xml("unclosed element at end of input".into()));
    }
    let root = stack.pop().unwrap();
    root.children
        .into_iter()
        .find_map(|c| match c {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
        .ok_or_else(|| Error::Xml("no root element".into()))
}

fn element_from(start: &BytesStart<'_>, pos: u64) -> Result<Element> {
    let mut el = Element {
        name: local_name(start.name().as_ref()),
        ..Default::default()
    };
    for attr in start.attributes() {
        let attr = attr.map_err(|e| xml_err(e, pos))?;
        let value = attr
            .unescape_value()
            .map_err(|e| xml_err(e, pos))?
            .into_owned();
        el.attrs.push((local_name(attr.key.as_ref()), value));
    }
    Ok(el)
}

fn article_type(value: Option<&str>) -> ArticleType {
    match value.unwrap_or("") {
        "research-article" | "research" | "full-length-article" => ArticleType::Research,
        "brief-report" | "rapid-communication" | "short-communication" | "letter" => {
            ArticleType::ShortCommunication
        }
        "review-article" | "review" => ArticleType::Review,
        _ => ArticleType::Other,
    }
}

fn season(text: &str) -> Option<Season> {
    match text.trim().to_lowercase().as_str() {
        "spring" => Some(Season::Spring),
        "summer" => Some(Season::Summer),
        "autumn" | "fall" => Some(Season::Autumn),
        "winter" => Some(Season::Winter),
        _ => None,
    }
}

fn author(name: &Element) -> Option<RawAuthor> {
    let surname = name.child("surname")?.text();
    let given = name.child("given-names").map(|g| g.text()).unwrap_or_default();
    Some(RawAuthor { surname, given })
}

/// Builds blocks from a container (section, list, boxed text, ...).
struct BlockBuilder<'a> {
    ref_ids: &'a HashSet<String>,
}

impl BlockBuilder<'_> {
    fn section(&self, sec: &Element) -> RawSection {
        let mut out = RawSection {
            heading: sec.child("title").map(|t| t.text()).unwrap_or_default(),
            ..Default::default()
        };
        self.container(sec, &mut out);
        out
    }

    fn container(&self, el: &Element, out: &mut RawSection) {
        for child in el.elements() {
            match child.name.as_str() {
                "title" | "label" => {}
                "sec" => out.subsections.push(self.section(child)),
                "p" => self.paragraph(child, BlockKind::Body, out),
                "fig" | "table-wrap" => {
                    if let Some(caption) = child.child("caption") {
                        self.paragraph(caption, BlockKind::Caption, out);
                    }
                }
                "fn" => self.paragraph(child, BlockKind::Footnote, out),
                _ => self.container(child, out),
            }
        }
    }

    /// Flattens one paragraph-like element into a block; nested figures and
    /// footnotes become blocks of their own after it.
    fn paragraph(&self, el: &Element, kind: BlockKind, out: &mut RawSection) {
        let mut block = RawBlock {
            kind,
            text: String::new(),
            anchors: Vec::new(),
        };
        let mut deferred = RawSection::default();
        self.inline(el, &mut block, &mut deferred, &mut 0);
        let trimmed_end = block.text.trim_end().chars().count();
        block.text = block.text.chars().take(trimmed_end).collect();
        block.anchors.retain(|a| a.offset < trimmed_end);
        out.blocks.push(block);
        out.blocks.extend(deferred.blocks);
    }

    fn inline(&self, el: &Element, block: &mut RawBlock, deferred: &mut RawSection, len: &mut usize) {
        for child in &el.children {
            match child {
                Node::Text(t) => {
                    for c in t.chars() {
                        let c = if c.is_whitespace() { ' ' } else { c };
                        if c == ' ' && (*len == 0 || block.text.ends_with(' ')) {
                            continue;
                        }
                        block.text.push(c);
                        *len += 1;
                    }
                }
                Node::Element(e) => match e.name.as_str() {
                    "xref" => {
                        let start = *len;
                        self.inline(e, block, deferred, len);
                        let offset = if *len > start { start } else { start.saturating_sub(1) };
                        for rid in e.attr("rid").unwrap_or("").split_whitespace() {
                            if self.ref_ids.contains(rid) && *len > 0 {
                                block.anchors.push(RawAnchor {
                                    ref_id: rid.to_string(),
                                    offset,
                                });
                            }
                        }
                    }
                    "fig" | "table-wrap" => {
                        if let Some(caption) = e.child("caption") {
                            self.paragraph(caption, BlockKind::Caption, deferred);
                        }
                    }
                    "fn" => self.paragraph(e, BlockKind::Footnote, deferred),
                    _ => self.inline(e, block, deferred, len),
                },
            }
        }
    }
}

fn reference(r: &Element) -> Option<RawReference> {
    let ref_id = r.attr("id")?.to_string();
    let citation = r
        .child("mixed-citation")
        .or_else(|| r.child("element-citation"))
        .or_else(|| r.child("citation"))
        .unwrap_or(r);
    let first = citation.find("name");
    let field = |name: &str| citation.find(name).map(|e| e.text()).filter(|s| !s.is_empty());
    Some(RawReference {
        ref_id,
        raw: citation.text(),
        surname: first.and_then(|n| n.child("surname")).map(|s| s.text()),
        given: first.and_then(|n| n.child("given-names")).map(|g| g.text()),
        year: field("year").and_then(|y| {
            y.chars()
                .filter(char::is_ascii_digit)
                .take(4)
                .collect::<String>()
                .parse()
                .ok()
        }),
        volume: field("volume"),
        first_page: field("fpage"),
    })
}

/// Converts one JATS-style article into the corpus document shape.
pub fn parse_jats(xml: &str) -> Result<RawDocument> {
    let article = parse_tree(xml)?;
    let meta = article.find("article-meta");
    let doc_id = meta
        .and_then(|m| m.child("article-id"))
        .map(|e| e.text())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::Xml("missing article-meta/article-id".into()))?;
    let journal = article
        .find("journal-title")
        .map(|e| e.text())
        .unwrap_or_default();
    let pub_date = meta.and_then(|m| m.child("pub-date"));
    let year = pub_date
        .and_then(|d| d.child("year"))
        .and_then(|y| y.text().parse().ok())
        .ok_or_else(|| Error::Xml(format!("{doc_id}: missing pub-date/year")))?;
    let month = pub_date
        .and_then(|d| d.child("month"))
        .and_then(|m| m.text().parse().ok());
    let season = pub_date
        .and_then(|d| d.child("season"))
        .and_then(|s| season(&s.text()));

    let mut names = Vec::new();
    if let Some(group) = meta.and_then(|m| m.find("contrib-group")) {
        group.find_all("name", &mut names);
    }
    let authors = names.into_iter().filter_map(author).collect();

    let mut refs = Vec::new();
    if let Some(list) = article.find("ref-list") {
        list.find_all("ref", &mut refs);
    }
    let references: Vec<RawReference> = refs.into_iter().filter_map(reference).collect();
    let ref_ids: HashSet<String> = references.iter().map(|r| r.ref_id.clone()).collect();

    let builder = BlockBuilder { ref_ids: &ref_ids };
    let mut sections = Vec::new();
    if let Some(body) = article.find("body") {
        let mut loose = RawSection::default();
        for child in body.elements() {
            if child.name == "sec" {
                if !loose.blocks.is_empty() {
                    sections.push(std::mem::take(&mut loose));
                }
                sections.push(builder.section(child));
            } else {
                let wrapper = Element {
                    children: vec![Node::Element(child.clone())],
                    ..Default::default()
                };
                builder.container(&wrapper, &mut loose);
            }
        }
        if !loose.blocks.is_empty() {
            sections.push(loose);
        }
    }
    if let Some(back) = article.find("back") {
        let mut notes = RawSection::default();
        let mut fns = Vec::new();
        back.find_all("fn", &mut fns);
        for f in fns {
            builder.paragraph(f, BlockKind::Footnote, &mut notes);
        }
        if !notes.blocks.is_empty() {
            sections.push(notes);
        }
    }

    Ok(RawDocument {
        doc_id,
        journal,
        year,
        month,
        season,
        article_type: article_type(article.attr("article-type")),
        title: meta
            .and_then(|m| m.find("article-title"))
            .map(|t| t.text())
            .unwrap_or_default(),
        abstract_text: meta
            .and_then(|m| m.find("abstract"))
            .map(|a| a.text())
            .unwrap_or_default(),
        authors,
        sections,
        references,
    })
}
