//! The annotated document model.
//!
//! A [`Document`] carries its text together with the token layer (surface
//! form, trailing-space flag, character offsets, lemma, UPOS, dependency head
//! and relation), sentence boundaries and entity spans. Offsets count Unicode
//! scalar values. Heads are document-level token indices; `None` marks the
//! root of a sentence.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::validate::{validate, Severity};

pub const ROOT_DEPREL: &str = "root";
pub const DEFAULT_DEPREL: &str = "dep";
pub const DEFAULT_UPOS: &str = "X";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub form: String,
    /// Exactly one space follows the token iff set.
    pub ws: bool,
    pub start: usize,
    pub end: usize,
    pub lemma: String,
    pub upos: String,
    pub head: Option<usize>,
    pub deprel: String,
}

impl Token {
    /// Creates a token with offsets still to be assigned by [`Document::assemble`].
    pub fn new(
        form: impl Into<String>,
        ws: bool,
        lemma: impl Into<String>,
        upos: impl Into<String>,
        head: Option<usize>,
        deprel: impl Into<String>,
    ) -> Self {
        Token {
            form: form.into(),
            ws,
            start: 0,
            end: 0,
            lemma: lemma.into(),
            upos: upos.into(),
            head,
            deprel: deprel.into(),
        }
    }

    pub fn char_len(&self) -> usize {
        self.form.chars().count()
    }
}

/// A labelled, half-open token range.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

impl Span {
    pub fn new(start: usize, end: usize, label: impl Into<String>) -> Self {
        Span {
            start,
            end,
            label: label.into(),
        }
    }

    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, token: usize) -> bool {
        self.start <= token && token < self.end
    }
}

/// Optional annotation layers for [`Document::from_tokens`].
///
/// Missing layers get defaults: lemma is the lowercased form, UPOS is `X`,
/// and heads form a chain where every token attaches to its predecessor
/// (`dep`) and the first token of each sentence is the root (`root`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Annotations {
    pub lemmas: Option<Vec<String>>,
    pub upos: Option<Vec<String>>,
    pub heads: Option<Vec<Option<usize>>>,
    pub deprels: Option<Vec<String>>,
}

/// Forms, whitespace flags, annotations, sentences and entity spans.
pub type Parts = (
    Vec<String>,
    Vec<bool>,
    Annotations,
    Vec<Range<usize>>,
    Vec<Span>,
);

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Document {
    pub text: String,
    pub tokens: Vec<Token>,
    pub sents: Vec<Range<usize>>,
    pub ents: Vec<Span>,
}

/// Concatenates `form` and, where `ws` is set, a single space for every token.
pub fn text_of(tokens: &[Token]) -> String {
    let mut text = String::with_capacity(tokens.iter().map(|t| t.form.len() + 1).sum());
    for token in tokens {
        text.push_str(&token.form);
        if token.ws {
            text.push(' ');
        }
    }
    text
}

/// Reassigns character offsets from forms and trailing-space flags.
pub(crate) fn assign_offsets(tokens: &mut [Token]) {
    let mut pos = 0;
    for token in tokens {
        token.start = pos;
        token.end = pos + token.char_len();
        pos = token.end + usize::from(token.ws);
    }
}

impl Document {
    /// Builds a document from token forms and whitespace flags.
    ///
    /// Text and offsets are derived; the result is validated and any
    /// error-level finding is reported as `INVALID_INPUT`.
    pub fn from_tokens<S: AsRef<str>>(
        forms: &[S],
        ws: &[bool],
        annotations: Annotations,
        sents: Vec<Range<usize>>,
        ents: Vec<Span>,
    ) -> Result<Document> {
        let n = forms.len();
        if ws.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} forms but {} whitespace flags",
                n,
                ws.len()
            )));
        }
        let check_len = |name: &str, len: Option<usize>| match len {
            Some(len) if len != n => Err(Error::InvalidInput(format!(
                "{} forms but {} {}",
                n, len, name
            ))),
            _ => Ok(()),
        };
        check_len("lemmas", annotations.lemmas.as_ref().map(Vec::len))?;
        check_len("upos tags", annotations.upos.as_ref().map(Vec::len))?;
        check_len("heads", annotations.heads.as_ref().map(Vec::len))?;
        check_len("deprels", annotations.deprels.as_ref().map(Vec::len))?;

        let sent_starts: Vec<bool> = {
            let mut starts = vec![false; n];
            for sent in &sents {
                if sent.start < n {
                    starts[sent.start] = true;
                }
            }
            starts
        };

        let heads = annotations.heads.unwrap_or_else(|| {
            (0..n)
                .map(|i| if sent_starts[i] { None } else { Some(i - 1) })
                .collect()
        });

        let tokens = forms
            .iter()
            .enumerate()
            .map(|(i, form)| {
                let form = form.as_ref();
                let lemma = match &annotations.lemmas {
                    Some(lemmas) => lemmas[i].clone(),
                    None => form.to_lowercase(),
                };
                let upos = match &annotations.upos {
                    Some(upos) => upos[i].clone(),
                    None => DEFAULT_UPOS.to_string(),
                };
                let deprel = match &annotations.deprels {
                    Some(deprels) => deprels[i].clone(),
                    None if heads[i].is_none() => ROOT_DEPREL.to_string(),
                    None => DEFAULT_DEPREL.to_string(),
                };
                Token::new(form, ws[i], lemma, upos, heads[i], deprel)
            })
            .collect();

        let doc = Document::assemble(tokens, sents, ents);
        doc.ensure_valid()?;
        Ok(doc)
    }

    /// Recomputes text and offsets from the token layer. Does not validate.
    pub fn assemble(mut tokens: Vec<Token>, sents: Vec<Range<usize>>, ents: Vec<Span>) -> Document {
        assign_offsets(&mut tokens);
        Document {
            text: text_of(&tokens),
            tokens,
            sents,
            ents,
        }
    }

    /// Splits the document into the argument lists of [`Document::from_tokens`].
    pub fn decompose(&self) -> Parts {
        let forms = self.tokens.iter().map(|t| t.form.clone()).collect();
        let ws = self.tokens.iter().map(|t| t.ws).collect();
        let annotations = Annotations {
            lemmas: Some(self.tokens.iter().map(|t| t.lemma.clone()).collect()),
            upos: Some(self.tokens.iter().map(|t| t.upos.clone()).collect()),
            heads: Some(self.tokens.iter().map(|t| t.head).collect()),
            deprels: Some(self.tokens.iter().map(|t| t.deprel.clone()).collect()),
        };
        (
            forms,
            ws,
            annotations,
            self.sents.clone(),
            self.ents.clone(),
        )
    }

    /// Fails with `INVALID_INPUT` if validation reports any error-level finding.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate(self);
        let errors: Vec<String> = report
            .findings
            .iter()
            .filter(|f| f.severity() == Severity::Error)
            .map(ToString::to_string)
            .collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(errors.join("; ")))
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Index of the sentence containing `token`.
    pub fn sent_of(&self, token: usize) -> Option<usize> {
        let idx = self.sents.partition_point(|s| s.end <= token);
        self.sents
            .get(idx)
            .filter(|s| s.contains(&token))
            .map(|_| idx)
    }

    /// The text covered by token range `range`, without the trailing space.
    pub fn range_text(&self, range: Range<usize>) -> String {
        if range.is_empty() {
            return String::new();
        }
        let first = &self.tokens[range.start];
        let last = &self.tokens[range.end - 1];
        self.text
            .chars()
            .skip(first.start)
            .take(last.end - first.start)
            .collect()
    }
}
