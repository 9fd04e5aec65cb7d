//! Invariant checks over [`Document`].

use std::fmt;

use serde::Serialize;

use crate::doc::{text_of, Document};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingCode {
    /// Empty form or whitespace inside a form.
    InvalidToken,
    OffsetMismatch,
    TextMismatch,
    HeadCycle,
    HeadCrossSentence,
    MultiRoot,
    NoRoot,
    SpanOverlap,
    SpanUnsorted,
    SpanOutOfRange,
    SpanCrossSentence,
    SentGap,
    TrailingWsWarning,
}

impl FindingCode {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::InvalidToken => "INVALID_TOKEN",
            FindingCode::OffsetMismatch => "OFFSET_MISMATCH",
            FindingCode::TextMismatch => "TEXT_MISMATCH",
            FindingCode::HeadCycle => "HEAD_CYCLE",
            FindingCode::HeadCrossSentence => "HEAD_CROSS_SENTENCE",
            FindingCode::MultiRoot => "MULTI_ROOT",
            FindingCode::NoRoot => "NO_ROOT",
            FindingCode::SpanOverlap => "SPAN_OVERLAP",
            FindingCode::SpanUnsorted => "SPAN_UNSORTED",
            FindingCode::SpanOutOfRange => "SPAN_OUT_OF_RANGE",
            FindingCode::SpanCrossSentence => "SPAN_CROSS_SENTENCE",
            FindingCode::SentGap => "SENT_GAP",
            FindingCode::TrailingWsWarning => "TRAILING_WS_WARNING",
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum Location {
    Document,
    Token(usize),
    Sentence(usize),
    Span(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Document => f.write_str("document"),
            Location::Token(i) => write!(f, "token {}", i),
            Location::Sentence(i) => write!(f, "sentence {}", i),
            Location::Span(i) => write!(f, "span {}", i),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    pub message: String,
    pub location: Location,
}

impl Finding {
    fn new(code: FindingCode, location: Location, message: impl Into<String>) -> Self {
        Finding {
            code,
            message: message.into(),
            location,
        }
    }

    pub fn severity(&self) -> Severity {
        match self.code {
            FindingCode::TrailingWsWarning => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.location, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    /// True when no error-level finding is present (warnings allowed).
    pub fn is_valid(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity() == Severity::Error)
    }

    pub fn has(&self, code: FindingCode) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    fn push(&mut self, code: FindingCode, location: Location, message: impl Into<String>) {
        self.findings.push(Finding::new(code, location, message));
    }
}

/// Checks every document invariant and reports each violation with its location.
pub fn validate(doc: &Document) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_tokens(doc, &mut report);
    let sent_ids = check_sents(doc, &mut report);
    check_heads(doc, &sent_ids, &mut report);
    check_ents(doc, &sent_ids, &mut report);
    report
}

fn check_tokens(doc: &Document, report: &mut ValidationReport) {
    let chars: Vec<char> = doc.text.chars().collect();
    let mut expected_start = 0;
    for (i, token) in doc.tokens.iter().enumerate() {
        if token.form.is_empty() {
            report.push(FindingCode::InvalidToken, Location::Token(i), "empty form");
        } else if token.form.chars().any(char::is_whitespace) {
            report.push(
                FindingCode::InvalidToken,
                Location::Token(i),
                format!("whitespace inside form {:?}", token.form),
            );
        }
        let len = token.char_len();
        if token.start != expected_start || token.end != token.start + len {
            report.push(
                FindingCode::OffsetMismatch,
                Location::Token(i),
                format!(
                    "offsets ({}, {}) but expected ({}, {})",
                    token.start,
                    token.end,
                    expected_start,
                    expected_start + len
                ),
            );
        }
        let slice_ok = token.start <= token.end
            && token.end <= chars.len()
            && chars[token.start..token.end]
                .iter()
                .copied()
                .eq(token.form.chars());
        if !slice_ok {
            report.push(
                FindingCode::TextMismatch,
                Location::Token(i),
                format!(
                    "text at ({}, {}) is not {:?}",
                    token.start, token.end, token.form
                ),
            );
        }
        expected_start += len + usize::from(token.ws);
    }
    if text_of(&doc.tokens) != doc.text {
        report.push(
            FindingCode::TextMismatch,
            Location::Document,
            "text differs from the token reconstruction",
        );
    }
    if doc.tokens.last().is_some_and(|t| t.ws) {
        report.push(
            FindingCode::TrailingWsWarning,
            Location::Token(doc.tokens.len() - 1),
            "document text ends with a space",
        );
    }
}

/// Returns the sentence index of every token, `None` where the partition is broken.
fn check_sents(doc: &Document, report: &mut ValidationReport) -> Vec<Option<usize>> {
    let n = doc.tokens.len();
    let mut ids = vec![None; n];
    let mut covered = vec![0u32; n];
    let mut expected = 0;
    for (s, sent) in doc.sents.iter().enumerate() {
        if sent.start >= sent.end {
            report.push(
                FindingCode::SentGap,
                Location::Sentence(s),
                "empty sentence",
            );
        }
        if sent.end > n {
            report.push(
                FindingCode::SentGap,
                Location::Sentence(s),
                format!("sentence ends at {} beyond {} tokens", sent.end, n),
            );
        }
        if sent.start != expected {
            report.push(
                FindingCode::SentGap,
                Location::Sentence(s),
                format!(
                    "sentence starts at {} but expected {}",
                    sent.start, expected
                ),
            );
        }
        for i in sent.start..sent.end.min(n) {
            covered[i] += 1;
            ids[i] = Some(s);
        }
        expected = sent.end.max(expected);
    }
    if expected < n {
        report.push(
            FindingCode::SentGap,
            Location::Document,
            format!("sentences cover {} of {} tokens", expected, n),
        );
    }
    for (i, c) in covered.iter().enumerate() {
        if *c != 1 {
            ids[i] = None;
        }
    }
    ids
}

fn check_heads(doc: &Document, sent_ids: &[Option<usize>], report: &mut ValidationReport) {
    let n = doc.tokens.len();
    // in-sentence head of each token, if usable for the tree checks
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (i, token) in doc.tokens.iter().enumerate() {
        let Some(head) = token.head else { continue };
        if head >= n {
            report.push(
                FindingCode::HeadCrossSentence,
                Location::Token(i),
                format!("head {} is outside the document", head),
            );
        } else if head == i {
            report.push(
                FindingCode::HeadCycle,
                Location::Token(i),
                "token heads itself",
            );
        } else if sent_ids[i].is_some() && sent_ids[i] != sent_ids[head] {
            report.push(
                FindingCode::HeadCrossSentence,
                Location::Token(i),
                format!("head {} lies in another sentence", head),
            );
        } else {
            parent[i] = Some(head);
        }
    }

    for (s, sent) in doc.sents.iter().enumerate() {
        if sent.start >= sent.end || sent.end > n {
            continue;
        }
        let roots = (sent.start..sent.end)
            .filter(|&i| doc.tokens[i].head.is_none())
            .count();
        match roots {
            0 => report.push(
                FindingCode::NoRoot,
                Location::Sentence(s),
                "sentence has no root",
            ),
            1 => {}
            k => report.push(
                FindingCode::MultiRoot,
                Location::Sentence(s),
                format!("sentence has {} roots", k),
            ),
        }
    }

    // Cycle detection: 0 = unvisited, 1 = on current path, 2 = done.
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(i) = cur {
            match state[i] {
                0 => {
                    state[i] = 1;
                    path.push(i);
                    cur = parent[i];
                }
                1 => {
                    let pos = path.iter().position(|&p| p == i).unwrap_or(0);
                    let cycle = &path[pos..];
                    let first = *cycle.iter().min().unwrap_or(&i);
                    report.push(
                        FindingCode::HeadCycle,
                        Location::Token(first),
                        format!("head cycle through tokens {:?}", cycle),
                    );
                    break;
                }
                _ => break,
            }
        }
        for i in path {
            state[i] = 2;
        }
    }
}

fn check_ents(doc: &Document, sent_ids: &[Option<usize>], report: &mut ValidationReport) {
    let n = doc.tokens.len();
    for (k, span) in doc.ents.iter().enumerate() {
        if span.start >= span.end || span.end > n {
            report.push(
                FindingCode::SpanOutOfRange,
                Location::Span(k),
                format!(
                    "span [{}, {}) is empty or beyond {} tokens",
                    span.start, span.end, n
                ),
            );
            continue;
        }
        if sent_ids[span.start].is_none() || sent_ids[span.start] != sent_ids[span.end - 1] {
            report.push(
                FindingCode::SpanCrossSentence,
                Location::Span(k),
                format!(
                    "span [{}, {}) crosses a sentence boundary",
                    span.start, span.end
                ),
            );
        }
        if k > 0 {
            let prev = &doc.ents[k - 1];
            if span.start < prev.start {
                report.push(
                    FindingCode::SpanUnsorted,
                    Location::Span(k),
                    format!(
                        "span starts at {} before previous span at {}",
                        span.start, prev.start
                    ),
                );
            }
        }
    }
    for (k, a) in doc.ents.iter().enumerate() {
        for b in &doc.ents[k + 1..] {
            if a.start < b.end && b.start < a.end {
                report.push(
                    FindingCode::SpanOverlap,
                    Location::Span(k),
                    format!(
                        "span [{}, {}) overlaps [{}, {})",
                        a.start, a.end, b.start, b.end
                    ),
                );
            }
        }
    }
}
