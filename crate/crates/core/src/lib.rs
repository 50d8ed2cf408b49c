//! Co-citation level analysis over full-text corpora.

pub mod analytics;
pub mod cocitation;
pub mod error;
pub mod format;
pub mod matcher;
pub mod measures;
mod matching;
pub mod model;
pub mod parser;
pub mod rng;
pub mod similarity;
pub mod synth;

pub use error::{Error, Result};
