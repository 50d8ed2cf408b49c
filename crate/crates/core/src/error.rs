use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("self-pair: record {0} cannot be paired with itself")]
    SelfPair(String),

    #[error("document {doc_id}: parse error at {location}: {message}")]
    Parse {
        doc_id: String,
        location: String,
        message: String,
    },

    #[error("document {doc_id}: anchor references undeclared ref_id {ref_id:?} at {location}")]
    Integrity {
        doc_id: String,
        ref_id: String,
        location: String,
    },

    #[error("duplicate identifier {0:?}")]
    DuplicateId(String),

    #[error("invalid date: {0}")]
    InvalidDate(String),

    #[error("invalid author name: {0}")]
    InvalidAuthor(String),

    #[error("cannot build an IDF table from an empty collection")]
    EmptyCollection,

    #[error("average document length is zero; BM25 is undefined for this collection")]
    ZeroAverageLength,

    #[error("cumulative distribution requires at least one value")]
    EmptyValues,

    #[error("threshold grid must be strictly ascending")]
    UnsortedGrid,

    #[error("precision/recall requires non-empty positive and negative sets")]
    EmptyClasses,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("xml: {0}")]
    Xml(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
