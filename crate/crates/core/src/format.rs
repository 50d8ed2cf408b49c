//! Serde shapes of the two input files: the corpus (one citing document per
//! line) and the bibliographic index (one cited record per line).

use serde::{Deserialize, Deserializer, Serialize};

use crate::model::{ArticleType, AuthorName, Season};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawAuthor {
    pub surname: String,
    #[serde(default)]
    pub given: String,
}

impl From<&RawAuthor> for AuthorName {
    fn from(a: &RawAuthor) -> Self {
        AuthorName {
            surname: a.surname.clone(),
            given: a.given.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawAnchor {
    pub ref_id: String,
    /// Character (not byte) offset into the block text.
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Body,
    /// List items count as body paragraphs.
    #[serde(rename = "list", alias = "list_item")]
    ListItem,
    Footnote,
    Caption,
    #[serde(other)]
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawBlock {
    pub kind: BlockKind,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub anchors: Vec<RawAnchor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct RawSection {
    #[serde(default)]
    pub heading: String,
    #[serde(default)]
    pub blocks: Vec<RawBlock>,
    /// Nested subsections; flattened into the enclosing main section.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subsections: Vec<RawSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawReference {
    pub ref_id: String,
    #[serde(default)]
    pub raw: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surname: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub given: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(
        default,
        deserialize_with = "opt_string_or_number",
        skip_serializing_if = "Option::is_none"
    )]
    pub volume: Option<String>,
    #[serde(
        default,
        deserialize_with = "opt_string_or_number",
        skip_serializing_if = "Option::is_none"
    )]
    pub first_page: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDocument {
    pub doc_id: String,
    pub journal: String,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub month: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub season: Option<Season>,
    #[serde(rename = "type")]
    pub article_type: ArticleType,
    #[serde(default)]
    pub title: String,
    #[serde(default, rename = "abstract")]
    pub abstract_text: String,
    #[serde(default)]
    pub authors: Vec<RawAuthor>,
    #[serde(default)]
    pub sections: Vec<RawSection>,
    #[serde(default)]
    pub references: Vec<RawReference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawBibRecord {
    pub record_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default, rename = "abstract")]
    pub abstract_text: String,
    #[serde(default)]
    pub authors: Vec<RawAuthor>,
    #[serde(default)]
    pub journal: String,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub month: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub season: Option<Season>,
    #[serde(default, deserialize_with = "string_or_number")]
    pub volume: String,
    #[serde(default, deserialize_with = "string_or_number")]
    pub first_page: String,
    #[serde(default)]
    pub references: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StringOrNumber {
    Str(String),
    Int(i64),
}

impl From<StringOrNumber> for String {
    fn from(v: StringOrNumber) -> Self {
        match v {
            StringOrNumber::Str(s) => s,
            StringOrNumber::Int(i) => i.to_string(),
        }
    }
}

fn string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    StringOrNumber::deserialize(d).map(String::from)
}

fn opt_string_or_number<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Option::<StringOrNumber>::deserialize(d).map(|v| v.map(String::from))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_document_line() {
        let line = r#"{"doc_id":"d1","journal":"Cell","year":2012,"type":"research",
            "sections":[{"heading":"Intro","blocks":[{"kind":"body","text":"As shown [1].",
            "anchors":[{"ref_id":"r1","offset":10}]}]}],
            "references":[{"ref_id":"r1","raw":"Smith J 2010","surname":"Smith","given":"J.",
            "year":2010,"volume":14,"first_page":"265"}]}"#;
        let doc: RawDocument = serde_json::from_str(line).unwrap();
        assert_eq!(doc.references[0].volume.as_deref(), Some("14"));
        assert_eq!(doc.sections[0].blocks[0].kind, BlockKind::Body);
        assert!(doc.month.is_none());
    }

    #[test]
    fn list_blocks_and_unknown_kinds() {
        let b: RawBlock = serde_json::from_str(r#"{"kind":"list","text":"x"}"#).unwrap();
        assert_eq!(b.kind, BlockKind::ListItem);
        let b: RawBlock = serde_json::from_str(r#"{"kind":"table","text":"x"}"#).unwrap();
        assert_eq!(b.kind, BlockKind::Other);
    }

    #[test]
    fn parses_bib_record_with_season() {
        let line = r#"{"record_id":"W1","title":"T","abstract":"A","authors":[{"surname":"Small","given":"H."}],
            "journal":"JASIS","year":1973,"season":"spring","volume":"24","first_page":265,"references":["X Y, 1970, J, V1, P2"]}"#;
        let rec: RawBibRecord = serde_json::from_str(line).unwrap();
        assert_eq!(rec.season, Some(Season::Spring));
        assert_eq!(rec.first_page, "265");
    }
}
