use serde::{Deserialize, Serialize};

use crate::doc::{Document, Span, Token};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonToken {
    form: String,
    ws: bool,
    lemma: String,
    upos: String,
    head: Option<usize>,
    deprel: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    text: String,
    tokens: Vec<JsonToken>,
    sents: Vec<[usize; 2]>,
    ents: Vec<Span>,
}

impl From<&Document> for JsonDoc {
    fn from(doc: &Document) -> Self {
        JsonDoc {
            text: doc.text.clone(),
            tokens: doc
                .tokens
                .iter()
                .map(|t| JsonToken {
                    form: t.form.clone(),
                    ws: t.ws,
                    lemma: t.lemma.clone(),
                    upos: t.upos.clone(),
                    head: t.head,
                    deprel: t.deprel.clone(),
                })
                .collect(),
            sents: doc.sents.iter().map(|s| [s.start, s.end]).collect(),
            ents: doc.ents.clone(),
        }
    }
}

impl From<JsonDoc> for Document {
    fn from(json: JsonDoc) -> Self {
        let tokens = json
            .tokens
            .into_iter()
            .map(|t| Token::new(t.form, t.ws, t.lemma, t.upos, t.head, t.deprel))
            .collect();
        let mut doc = Document::assemble(
            tokens,
            json.sents.into_iter().map(|[s, e]| s..e).collect(),
            json.ents,
        );
        // keep the stored text so that validation can compare it with the tokens
        doc.text = json.text;
        doc
    }
}

/// Reads one document per non-empty line without validating it.
///
/// Offsets are derived from the token layer; the stored text is kept as is.
pub fn read_jsonl(input: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        if line.trim().is_empty() {
            log::warn!("line {}: skipping empty line", idx + 1);
            continue;
        }
        let json: JsonDoc = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        docs.push(Document::from(json));
    }
    Ok(docs)
}

/// Parses JSONL and rejects any document that fails validation.
pub fn parse_jsonl(input: &str) -> Result<Vec<Document>> {
    let docs = read_jsonl(input)?;
    for (i, doc) in docs.iter().enumerate() {
        doc.ensure_valid().map_err(|e| e.in_document(i))?;
    }
    Ok(docs)
}

pub fn emit_jsonl_doc(doc: &Document) -> String {
    serde_json::to_string(&JsonDoc::from(doc)).expect("document serializes")
}

/// One compact JSON object per document, fields in schema order, LF-terminated.
pub fn emit_jsonl(docs: &[Document]) -> String {
    let mut out = String::new();
    for doc in docs {
        out.push_str(&emit_jsonl_doc(doc));
        out.push('\n');
    }
    out
}
