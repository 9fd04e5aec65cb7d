//! CoNLL-U reading and writing.
//!
//! Sentences are grouped into documents at `# newdoc` comments; without any,
//! the whole file is one document. Only FORM, LEMMA, UPOS, HEAD, DEPREL and
//! `SpaceAfter=No` in MISC are kept. Multiword-token ranges and empty nodes
//! are rejected.

use std::fmt::Write;

use crate::doc::{Document, Token};
use crate::error::{Error, Result};

#[derive(Default)]
struct DocBuilder {
    tokens: Vec<Token>,
    sents: Vec<std::ops::Range<usize>>,
}

struct PendingSentence {
    first_line: usize,
    tokens: Vec<(Token, usize)>,
    /// 1-based per-sentence heads, 0 for root.
    heads: Vec<usize>,
}

impl DocBuilder {
    fn finish_sentence(&mut self, sent: PendingSentence) -> Result<()> {
        let offset = self.tokens.len();
        let n = sent.tokens.len();
        for ((mut token, line), head) in sent.tokens.into_iter().zip(sent.heads) {
            if head > n {
                return Err(Error::Parse {
                    line,
                    message: format!("head {} beyond sentence length {}", head, n),
                });
            }
            token.head = (head > 0).then(|| offset + head - 1);
            self.tokens.push(token);
        }
        if n == 0 {
            return Err(Error::Parse {
                line: sent.first_line,
                message: "empty sentence".into(),
            });
        }
        self.sents.push(offset..offset + n);
        Ok(())
    }

    fn build(self) -> Document {
        Document::assemble(self.tokens, self.sents, Vec::new())
    }
}

fn parse_token_line(line: &str, line_no: usize, expected_id: usize) -> Result<(Token, usize)> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected 10 tab-separated columns, found {}", cols.len()),
        });
    }
    let id = cols[0];
    if id.contains('-') || id.contains('.') {
        return Err(Error::UnsupportedMwt {
            line: line_no,
            id: id.to_string(),
        });
    }
    let id: usize = id.parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("invalid token id {:?}", id),
    })?;
    if id != expected_id {
        return Err(Error::Parse {
            line: line_no,
            message: format!("token id {} but expected {}", id, expected_id),
        });
    }
    let head: usize = cols[6].parse().map_err(|_| Error::Parse {
        line: line_no,
        message: format!("invalid head {:?}", cols[6]),
    })?;
    let form = cols[1];
    let lemma = if cols[2] == "_" {
        form.to_lowercase()
    } else {
        cols[2].to_string()
    };
    let ws = !cols[9].split('|').any(|f| f == "SpaceAfter=No");
    Ok((Token::new(form, ws, lemma, cols[3], None, cols[7]), head))
}

fn is_newdoc(comment: &str) -> bool {
    let rest = comment.trim_start_matches('#').trim_start();
    rest == "newdoc" || rest.starts_with("newdoc ")
}

/// Reads documents without validating them.
pub fn read_conllu(input: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut current: Option<DocBuilder> = None;
    let mut sentence: Option<PendingSentence> = None;

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            if let Some(sent) = sentence.take() {
                current
                    .get_or_insert_with(DocBuilder::default)
                    .finish_sentence(sent)?;
            }
            continue;
        }
        if line.starts_with('#') {
            if is_newdoc(line) {
                if sentence.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "# newdoc inside a sentence".into(),
                    });
                }
                if let Some(doc) = current.take() {
                    docs.push(doc.build());
                }
                current = Some(DocBuilder::default());
            }
            continue;
        }
        let sent = sentence.get_or_insert_with(|| PendingSentence {
            first_line: line_no,
            tokens: Vec::new(),
            heads: Vec::new(),
        });
        let (token, head) = parse_token_line(line, line_no, sent.tokens.len() + 1)?;
        sent.tokens.push((token, line_no));
        sent.heads.push(head);
    }
    if let Some(sent) = sentence.take() {
        current
            .get_or_insert_with(DocBuilder::default)
            .finish_sentence(sent)?;
    }
    if let Some(doc) = current.take() {
        docs.push(doc.build());
    }
    Ok(docs)
}

/// Parses CoNLL-U and rejects any document that fails validation.
pub fn parse_conllu(input: &str) -> Result<Vec<Document>> {
    let docs = read_conllu(input)?;
    for (i, doc) in docs.iter().enumerate() {
        doc.ensure_valid().map_err(|e| e.in_document(i))?;
    }
    Ok(docs)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConlluOutput {
    pub text: String,
    /// Entity spans that the format cannot carry.
    pub spans_dropped: usize,
}

fn column(value: &str, what: &str) -> Result<String> {
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::InvalidInput(format!(
            "{} {:?} contains a tab or line break",
            what, value
        )));
    }
    Ok(if value.is_empty() {
        "_".to_string()
    } else {
        value.to_string()
    })
}

/// Writes each document as `# newdoc`, then per sentence a regenerated
/// `# text = ...` comment, the token lines and a blank line.
pub fn emit_conllu(docs: &[Document]) -> Result<ConlluOutput> {
    let mut out = ConlluOutput::default();
    for (d, doc) in docs.iter().enumerate() {
        if !doc.ents.is_empty() {
            log::warn!(
                "document {}: dropping {} entity spans in CoNLL-U output",
                d,
                doc.ents.len()
            );
            out.spans_dropped += doc.ents.len();
        }
        out.text.push_str("# newdoc\n");
        for sent in &doc.sents {
            writeln!(out.text, "# text = {}", doc.range_text(sent.clone()))
                .expect("write to string");
            for (k, token) in doc.tokens[sent.clone()].iter().enumerate() {
                let head = token.head.map_or(0, |h| h + 1 - sent.start);
                writeln!(
                    out.text,
                    "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\t{}",
                    k + 1,
                    column(&token.form, "form")?,
                    column(&token.lemma, "lemma")?,
                    column(&token.upos, "upos")?,
                    head,
                    column(&token.deprel, "deprel")?,
                    if token.ws { "_" } else { "SpaceAfter=No" },
                )
                .expect("write to string");
            }
            out.text.push('\n');
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::Span;

    #[test]
    fn single_token_sentence() {
        let docs = parse_conllu("1\tHi\thi\tINTJ\t_\t_\t0\troot\t_\tSpaceAfter=No\n").unwrap();
        assert_eq!(docs.len(), 1);
        let t = &docs[0].tokens[0];
        assert_eq!((t.form.as_str(), t.head, t.ws), ("Hi", None, false));
        assert_eq!(docs[0].text, "Hi");
    }

    #[test]
    fn column_count_is_checked() {
        let err = parse_conllu("1\tHi\thi\tINTJ\t_\t_\t0\troot\t_\n").unwrap_err();
        assert_eq!(err.code(), "PARSE_ERROR");
        assert!(err.to_string().starts_with("line 1"));
    }

    #[test]
    fn multiword_tokens_and_empty_nodes_are_rejected() {
        let mwt = "1-2\tdu\t_\t_\t_\t_\t_\t_\t_\t_\n1\tde\tde\tADP\t_\t_\t0\troot\t_\t_\n";
        assert_eq!(parse_conllu(mwt).unwrap_err().code(), "UNSUPPORTED_MWT");
        let empty = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n1.1\tb\tb\tX\t_\t_\t_\t_\t0:root\t_\n";
        assert_eq!(parse_conllu(empty).unwrap_err().code(), "UNSUPPORTED_MWT");
    }

    const TWO_DOCS: &str = "\
# newdoc id = d1
# sent_id = 1
# text = Jane Doe sleeps.
1\tJane\tJane\tPROPN\tNNP\t_\t3\tnsubj\t_\t_
2\tDoe\tDoe\tPROPN\tNNP\t_\t1\tflat\t_\t_
3\tsleeps\tsleep\tVERB\tVBZ\t_\t0\troot\t_\tSpaceAfter=No
4\t.\t.\tPUNCT\t.\t_\t3\tpunct\t_\t_

1\tOK\t_\tINTJ\t_\t_\t0\troot\t_\tSpaceAfter=No

# newdoc
1\tBye\tbye\tINTJ\t_\t_\t0\troot\t_\tSpaceAfter=No
";

    #[test]
    fn documents_split_at_newdoc() {
        let docs = parse_conllu(TWO_DOCS).unwrap();
        assert_eq!(docs.len(), 2);
        let d = &docs[0];
        assert_eq!(d.text, "Jane Doe sleeps. OK");
        assert_eq!(d.sents, vec![0..4, 4..5]);
        assert_eq!(d.tokens[0].head, Some(2));
        assert_eq!(d.tokens[4].head, None);
        assert_eq!(d.tokens[4].lemma, "ok");
        assert_eq!(docs[1].text, "Bye");
    }

    #[test]
    fn emit_then_parse_is_a_fixpoint() {
        let docs = parse_conllu(TWO_DOCS).unwrap();
        let out = emit_conllu(&docs).unwrap();
        assert!(out.text.contains("# text = Jane Doe sleeps.\n"));
        assert_eq!(parse_conllu(&out.text).unwrap(), docs);
        assert_eq!(emit_conllu(&parse_conllu(&out.text).unwrap()).unwrap(), out);
    }

    #[test]
    fn empty_inputs() {
        assert!(parse_conllu("").unwrap().is_empty());
        assert_eq!(emit_conllu(&[]).unwrap().text, "");
        let docs = parse_conllu("# newdoc\n").unwrap();
        assert_eq!(docs, vec![Document::default()]);
        assert_eq!(emit_conllu(&docs).unwrap().text, "# newdoc\n");
    }

    #[test]
    fn entities_are_dropped_on_emit() {
        let mut docs = parse_conllu(TWO_DOCS).unwrap();
        docs[0].ents = vec![Span::new(0, 2, "PER")];
        let out = emit_conllu(&docs).unwrap();
        assert_eq!(out.spans_dropped, 1);
        let back = parse_conllu(&out.text).unwrap();
        assert!(back[0].ents.is_empty());
    }

    #[test]
    fn bad_heads() {
        let err = parse_conllu("1\ta\ta\tX\t_\t_\t5\tdep\t_\t_\n").unwrap_err();
        assert_eq!(err.code(), "PARSE_ERROR");
        let err = parse_conllu("1\ta\ta\tX\t_\t_\t_\tdep\t_\t_\n").unwrap_err();
        assert_eq!(err.code(), "PARSE_ERROR");
        // two roots is a validation failure, not a syntax error
        let two_roots =
            "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t0\troot\t_\tSpaceAfter=No\n";
        assert_eq!(parse_conllu(two_roots).unwrap_err().code(), "INVALID_INPUT");
        assert_eq!(read_conllu(two_roots).unwrap().len(), 1);
        let skipped_id = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n3\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n";
        assert_eq!(parse_conllu(skipped_id).unwrap_err().code(), "PARSE_ERROR");
    }
}
