//! Bracket regions and grouping of adjacent citation anchors.

use super::{ParagraphBlock, SentenceSpan};

/// A matched pair of `(`/`)` or `[`/`]`, as char offsets of the delimiters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub open: usize,
    pub close: usize,
}

fn closer_for(c: char) -> Option<char> {
    match c {
        '(' => Some(')'),
        '[' => Some(']'),
        _ => None,
    }
}

/// Matched bracket regions in order of their opening delimiter. Unmatched
/// delimiters are ignored, so a stray "(" never swallows the paragraph.
pub fn bracket_regions(chars: &[char]) -> Vec<Region> {
    let mut stack: Vec<(char, usize)> = Vec::new();
    let mut regions = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        if let Some(close) = closer_for(c) {
            stack.push((close, i));
        } else if c == ')' || c == ']' {
            if let Some(depth) = stack.iter().rposition(|&(want, _)| want == c) {
                let (_, open) = stack[depth];
                stack.truncate(depth);
                regions.push(Region { open, close: i });
            }
        }
    }
    regions.sort_by_key(|r| r.open);
    regions
}

/// Innermost enclosing region for every char position (delimiters included).
pub fn innermost_regions(len: usize, regions: &[Region]) -> Vec<Option<usize>> {
    let mut inner = vec![None; len];
    // sorted by `open`, so nested regions overwrite their parents
    for (id, r) in regions.iter().enumerate() {
        for slot in &mut inner[r.open..=r.close] {
            *slot = Some(id);
        }
    }
    inner
}

fn is_separator(c: char) -> bool {
    c.is_whitespace() || matches!(c, ',' | ';' | '-' | '\u{2013}' | '\u{2014}')
}

/// True when `between` holds only separators and the word "and".
pub fn separator_only(between: &str) -> bool {
    between
        .split(is_separator)
        .filter(|w| !w.is_empty())
        .all(|w| w.eq_ignore_ascii_case("and"))
}

/// A dash between two separately bracketed markers, as in "[1]–[3]".
fn bracketed_range(between: &str) -> bool {
    let squeezed: String = between.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = squeezed
        .trim_start_matches([')', ']'])
        .trim_end_matches(['(', '[']);
    inner.len() < squeezed.len() && matches!(inner, "-" | "\u{2013}" | "\u{2014}")
}

/// End of the citation marker starting at `offset`: an opening delimiter is
/// skipped, then the alphanumeric run that follows.
fn marker_end(chars: &[char], offset: usize) -> usize {
    let mut i = offset;
    if i < chars.len() && closer_for(chars[i]).is_some() {
        i += 1;
    }
    while i < chars.len() && chars[i].is_alphanumeric() {
        i += 1;
    }
    i.max(offset + 1).min(chars.len())
}

fn sentence_of(spans: &[SentenceSpan], offset: usize) -> Option<usize> {
    spans.iter().position(|s| s.start <= offset && offset < s.end)
}

/// Paragraph-local bracket group for each anchor (anchors sorted by offset).
///
/// Consecutive anchors share a group when they sit in the same sentence and
/// either share their innermost bracket region or are separated only by
/// whitespace, commas, semicolons, dashes and "and". A dash between two
/// separately bracketed markers reads as a numeric range and also joins.
pub fn group_brackets(paragraph: &ParagraphBlock, sentences: &[SentenceSpan]) -> Vec<usize> {
    let chars: Vec<char> = paragraph.text.chars().collect();
    let regions = bracket_regions(&chars);
    let inner = innermost_regions(chars.len(), &regions);

    let mut groups = Vec::with_capacity(paragraph.citation_anchors.len());
    let mut current = 0;
    for (i, (_, offset)) in paragraph.citation_anchors.iter().enumerate() {
        if i > 0 {
            let prev = paragraph.citation_anchors[i - 1].1;
            let same_sentence = sentence_of(sentences, prev) == sentence_of(sentences, *offset);
            let same_region = inner[prev].is_some() && inner[prev] == inner[*offset];
            let joined = same_sentence && (same_region || {
                let from = marker_end(&chars, prev).min(*offset);
                let between: String = chars[from..*offset].iter().collect();
                separator_only(&between) || bracketed_range(&between)
            });
            if !joined {
                current += 1;
            }
        }
        groups.push(current);
    }
    groups
}
