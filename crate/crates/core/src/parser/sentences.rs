//! Rule-based sentence splitting with an abbreviation list.

use std::path::Path;

use super::brackets::{bracket_regions, innermost_regions};
use super::SentenceSpan;
use crate::error::Result;

const DEFAULT_LIST: &str = include_str!("../../data/abbreviations.txt");

/// Abbreviations after which a period does not end a sentence.
///
/// Entries are stored lowercased and split into words, so multi-word forms
/// such as "et al." compare against the words preceding the period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abbreviations {
    entries: Vec<Vec<String>>,
}

impl Default for Abbreviations {
    fn default() -> Self {
        Self::parse(DEFAULT_LIST)
    }
}

impl Abbreviations {
    /// One entry per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split_whitespace().map(str::to_lowercase).collect())
            .collect();
        Abbreviations { entries }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the period at `dot` closes an abbreviation or an initial.
    fn covers(&self, chars: &[char], dot: usize) -> bool {
        let words = preceding_words(chars, dot, 3);
        let Some(last) = words.last() else {
            return false;
        };
        let mut letters = last.chars();
        if let (Some(c), Some('.'), None) = (letters.next(), letters.next(), letters.next()) {
            if c.is_alphabetic() && c.is_uppercase() {
                return true;
            }
        }
        self.entries.iter().any(|entry| {
            entry.len() <= words.len()
                && entry
                    .iter()
                    .rev()
                    .zip(words.iter().rev())
                    .all(|(e, w)| *e == w.to_lowercase())
        })
    }

    /// Splits `text` into spans that partition it. A sentence ends at `.`, `?`
    /// or `!` (optionally followed by closing quotes) when whitespace and then
    /// an uppercase letter or digit follow, possibly behind an opening quote.
    /// Terminators inside a bracket region or ending a known abbreviation do
    /// not split. Whitespace after a terminator belongs to the sentence it
    /// closes.
    pub fn split(&self, text: &str) -> Vec<SentenceSpan> {
        let chars: Vec<char> = text.chars().collect();
        let n = chars.len();
        if n == 0 {
            return Vec::new();
        }
        let inner = innermost_regions(n, &bracket_regions(&chars));

        let mut spans = Vec::new();
        let mut start = 0;
        for i in 0..n {
            let c = chars[i];
            if !matches!(c, '.' | '?' | '!') || inner[i].is_some() {
                continue;
            }
            let mut j = i + 1;
            while j < n && matches!(chars[j], '"' | '\'' | '\u{201d}' | '\u{2019}') {
                j += 1;
            }
            if j >= n || !chars[j].is_whitespace() {
                continue;
            }
            let mut k = j;
            while k < n && chars[k].is_whitespace() {
                k += 1;
            }
            let mut first = k;
            while first < n && matches!(chars[first], '"' | '\'' | '\u{201c}' | '\u{2018}') {
                first += 1;
            }
            if first >= n || !(chars[first].is_uppercase() || chars[first].is_ascii_digit()) {
                continue;
            }
            if c == '.' && self.covers(&chars, i) {
                continue;
            }
            spans.push(SentenceSpan { start, end: k });
            start = k;
        }
        spans.push(SentenceSpan { start, end: n });
        spans
    }
}

/// Up to `max` whitespace-delimited words ending at `end`
/// (inclusive), with leading opening punctuation stripped from each.
fn preceding_words(chars: &[char], end: usize, max: usize) -> Vec<String> {
    let mut words = Vec::new();
    let mut i = end + 1;
    while words.len() < max && i > 0 {
        let stop = i;
        while i > 0 && !chars[i - 1].is_whitespace() {
            i -= 1;
        }
        let word: String = chars[i..stop]
            .iter()
            .collect::<String>()
            .trim_start_matches(['(', '[', '"', '\'', '\u{201c}', '\u{2018}'])
            .to_string();
        words.push(word);
        while i > 0 && chars[i - 1].is_whitespace() {
            i -= 1;
        }
    }
    words.reverse();
    words
}

/// Splits with the built-in abbreviation list.
pub fn split_sentences(text: &str) -> Vec<SentenceSpan> {
    Abbreviations::default().split(text)
}
