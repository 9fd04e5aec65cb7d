//! Corpus formats: CoNLL-U and line-delimited JSON documents.
//!
//! The JSONL schema, one object per line, keys in this order and no extra
//! whitespace:
//!
//! ```text
//! {"text":STR,
//!  "tokens":[{"form":STR,"ws":BOOL,"lemma":STR,"upos":STR,"head":INT|null,"deprel":STR},...],
//!  "sents":[[START,END],...],
//!  "ents":[{"start":INT,"end":INT,"label":STR},...]}
//! ```
//!
//! `head` is a document-level token index; `null` marks a sentence root.
//! Entity spans only survive in JSONL.

mod conllu;
mod jsonl;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use conllu::{emit_conllu, parse_conllu, read_conllu, ConlluOutput};
pub use jsonl::{emit_jsonl, emit_jsonl_doc, parse_jsonl, read_jsonl};

use crate::doc::Document;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    Conllu,
    Jsonl,
}

impl CorpusFormat {
    /// Guesses the format from a file extension (`.conllu`, `.conll` or `.jsonl`).
    pub fn from_path(path: &Path) -> Option<CorpusFormat> {
        match path.extension()?.to_str()? {
            "conllu" | "conll" => Some(CorpusFormat::Conllu),
            "jsonl" | "json" => Some(CorpusFormat::Jsonl),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CorpusFormat::Conllu => "conllu",
            CorpusFormat::Jsonl => "jsonl",
        }
    }

    /// Parses and validates a corpus.
    pub fn parse(self, input: &str) -> Result<Vec<Document>> {
        match self {
            CorpusFormat::Conllu => parse_conllu(input),
            CorpusFormat::Jsonl => parse_jsonl(input),
        }
    }

    /// Reads a corpus without validating documents.
    pub fn read(self, input: &str) -> Result<Vec<Document>> {
        match self {
            CorpusFormat::Conllu => read_conllu(input),
            CorpusFormat::Jsonl => read_jsonl(input),
        }
    }

    /// Serializes a corpus; returns the text and the number of entity spans
    /// the format could not represent.
    pub fn emit(self, docs: &[Document]) -> Result<(String, usize)> {
        match self {
            CorpusFormat::Conllu => emit_conllu(docs).map(|o| (o.text, o.spans_dropped)),
            CorpusFormat::Jsonl => Ok((emit_jsonl(docs), 0)),
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conllu" => Ok(CorpusFormat::Conllu),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(Error::InvalidParam(format!(
                "unknown corpus format {:?}",
                other
            ))),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
