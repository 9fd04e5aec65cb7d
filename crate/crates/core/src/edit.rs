//! Token-range replacement with full annotation remapping.
//!
//! An [`EditPlan`] is a sorted list of disjoint, single-sentence
//! replacements. [`apply_edits`] realizes it on a [`Document`] and rebuilds
//! text, offsets, sentence ranges, dependency heads and entity spans.
//!
//! Each replacement is contracted onto its first new token (the anchor). The
//! anchor takes over the external head and relation of the range's root, the
//! remaining new tokens attach to the anchor as `flat`, and every outside
//! token that pointed into the range now points at the anchor.

use std::ops::Range;

use crate::doc::{Document, Span, Token};
use crate::error::{Error, Result};

pub const FLAT_DEPREL: &str = "flat";

/// What happens to an entity span whose range equals a replaced range.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SpanPolicy {
    #[default]
    Transfer,
    Drop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewToken {
    pub form: String,
    pub ws: bool,
    pub lemma: Option<String>,
    pub upos: Option<String>,
}

impl NewToken {
    pub fn new(form: impl Into<String>, ws: bool) -> Self {
        NewToken {
            form: form.into(),
            ws,
            lemma: None,
            upos: None,
        }
    }

    pub fn with_lemma(mut self, lemma: impl Into<String>) -> Self {
        self.lemma = Some(lemma.into());
        self
    }

    pub fn with_upos(mut self, upos: impl Into<String>) -> Self {
        self.upos = Some(upos.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub range: Range<usize>,
    pub new_tokens: Vec<NewToken>,
    pub span_policy: SpanPolicy,
}

impl Replacement {
    pub fn new(range: Range<usize>, new_tokens: Vec<NewToken>) -> Self {
        Replacement {
            range,
            new_tokens,
            span_policy: SpanPolicy::Transfer,
        }
    }

    pub fn with_policy(mut self, policy: SpanPolicy) -> Self {
        self.span_policy = policy;
        self
    }

    fn delta(&self) -> isize {
        self.new_tokens.len() as isize - self.range.len() as isize
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EditPlan {
    pub replacements: Vec<Replacement>,
}

impl EditPlan {
    pub fn new(replacements: Vec<Replacement>) -> Self {
        EditPlan { replacements }
    }

    pub fn is_empty(&self) -> bool {
        self.replacements.is_empty()
    }

    /// Checks ordering, disjointness, bounds and new-token forms.
    /// Sentence confinement is checked against a document in [`apply_edits`].
    pub fn check(&self, n: usize) -> Result<()> {
        let mut prev_end = 0;
        for (k, r) in self.replacements.iter().enumerate() {
            if r.range.start >= r.range.end {
                return Err(Error::InvalidPlan(format!(
                    "replacement {} has empty range [{}, {})",
                    k, r.range.start, r.range.end
                )));
            }
            if r.range.end > n {
                return Err(Error::InvalidPlan(format!(
                    "replacement {} range [{}, {}) exceeds {} tokens",
                    k, r.range.start, r.range.end, n
                )));
            }
            if k > 0 && r.range.start < prev_end {
                return Err(Error::InvalidPlan(format!(
                    "replacement {} overlaps or precedes its predecessor",
                    k
                )));
            }
            if r.new_tokens.is_empty() {
                return Err(Error::InvalidPlan(format!(
                    "replacement {} has no new tokens",
                    k
                )));
            }
            for t in &r.new_tokens {
                if t.form.is_empty() || t.form.chars().any(char::is_whitespace) {
                    return Err(Error::InvalidPlan(format!(
                        "replacement {} has invalid form {:?}",
                        k, t.form
                    )));
                }
            }
            prev_end = r.range.end;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EditStats {
    pub spans_dropped: usize,
    pub spans_transferred: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edited {
    pub doc: Document,
    pub stats: EditStats,
}

/// Lowest-index token of `range` whose ancestors never re-enter the range.
///
/// Such a token has no head or a head outside the range. Requiring the
/// whole ancestor chain to stay outside guarantees that contracting the
/// range onto this token's attachment cannot create a cycle.
fn top_member(heads: &[Option<usize>], range: &Range<usize>) -> usize {
    'members: for m in range.clone() {
        let mut cur = heads[m];
        let mut steps = 0;
        while let Some(h) = cur {
            if range.contains(&h) {
                continue 'members;
            }
            steps += 1;
            if steps > heads.len() {
                break;
            }
            cur = heads[h];
        }
        return m;
    }
    range.start
}

fn check_range(doc: &Document, range: &Range<usize>) -> Result<usize> {
    let invalid = |reason: &str| Error::InvalidRange {
        start: range.start,
        end: range.end,
        reason: reason.to_string(),
    };
    if range.start >= range.end {
        return Err(invalid("empty range"));
    }
    if range.end > doc.tokens.len() {
        return Err(invalid("range exceeds token count"));
    }
    let sent = doc
        .sent_of(range.start)
        .ok_or_else(|| invalid("range start is not in a sentence"))?;
    if doc.sents[sent].end < range.end {
        return Err(invalid("range crosses a sentence boundary"));
    }
    Ok(sent)
}

/// The syntactic root of a token range: the lowest-index member whose head
/// is absent or outside the range (and whose ancestors stay outside it).
pub fn span_root(doc: &Document, range: Range<usize>) -> Result<usize> {
    check_range(doc, &range)?;
    let heads: Vec<Option<usize>> = doc.tokens.iter().map(|t| t.head).collect();
    Ok(top_member(&heads, &range))
}

/// Maps every old token index to its index after the plan is applied.
///
/// Tokens inside a replaced range map to that replacement's anchor.
pub fn compute_token_map(plan: &EditPlan, n: usize) -> Vec<usize> {
    let mut map = Vec::with_capacity(n);
    let mut shift: isize = 0;
    let mut reps = plan.replacements.iter().peekable();
    let mut i = 0;
    while i < n {
        match reps.peek() {
            Some(r) if r.range.start == i => {
                let anchor = (i as isize + shift) as usize;
                for _ in r.range.clone() {
                    map.push(anchor);
                }
                i = r.range.end;
                shift += r.delta();
                reps.next();
            }
            _ => {
                map.push((i as isize + shift) as usize);
                i += 1;
            }
        }
    }
    map
}

/// New index for an exclusive end boundary `end` (a token index or `n`).
fn map_boundary(map: &[usize], end: usize, new_n: usize) -> usize {
    map.get(end).copied().unwrap_or(new_n)
}

/// Applies `plan` to `doc`, returning a new document with remapped annotations.
pub fn apply_edits(doc: &Document, plan: &EditPlan) -> Result<Edited> {
    let n = doc.tokens.len();
    plan.check(n)?;
    let mut sent_ranges = Vec::with_capacity(plan.replacements.len());
    for r in &plan.replacements {
        let sent = check_range(doc, &r.range).map_err(|e| Error::InvalidPlan(e.to_string()))?;
        sent_ranges.push(doc.sents[sent].clone());
    }
    if plan.is_empty() {
        return Ok(Edited {
            doc: doc.clone(),
            stats: EditStats::default(),
        });
    }

    // Contract each range onto its first token, in plan order, in the old
    // index space. Later ranges see earlier contractions.
    let mut heads: Vec<Option<usize>> = doc.tokens.iter().map(|t| t.head).collect();
    let mut roots = Vec::with_capacity(plan.replacements.len());
    for (r, sent) in plan.replacements.iter().zip(&sent_ranges) {
        let range = &r.range;
        let root = top_member(&heads, range);
        let rep = range.start;
        let root_head = heads[root];
        for t in sent.clone() {
            if range.contains(&t) {
                continue;
            }
            if heads[t].is_some_and(|h| range.contains(&h)) {
                heads[t] = Some(rep);
            }
        }
        for t in range.clone() {
            heads[t] = None;
        }
        heads[rep] = root_head;
        roots.push(root);
    }

    let map = compute_token_map(plan, n);
    let new_n = (n as isize
        + plan
            .replacements
            .iter()
            .map(Replacement::delta)
            .sum::<isize>()) as usize;

    let mut tokens = Vec::with_capacity(new_n);
    let mut reps = plan.replacements.iter().zip(&roots).peekable();
    let mut i = 0;
    while i < n {
        match reps.peek() {
            Some((r, &root)) if r.range.start == i => {
                let root_tok = &doc.tokens[root];
                let anchor = map[i];
                for (k, nt) in r.new_tokens.iter().enumerate() {
                    let (head, deprel) = if k == 0 {
                        (heads[i].map(|h| map[h]), root_tok.deprel.clone())
                    } else {
                        (Some(anchor), FLAT_DEPREL.to_string())
                    };
                    tokens.push(Token::new(
                        nt.form.clone(),
                        nt.ws,
                        nt.lemma.clone().unwrap_or_else(|| nt.form.to_lowercase()),
                        nt.upos.clone().unwrap_or_else(|| root_tok.upos.clone()),
                        head,
                        deprel,
                    ));
                }
                i = r.range.end;
                reps.next();
            }
            _ => {
                let mut token = doc.tokens[i].clone();
                token.head = heads[i].map(|h| map[h]);
                tokens.push(token);
                i += 1;
            }
        }
    }
    debug_assert_eq!(tokens.len(), new_n);

    let sents = doc
        .sents
        .iter()
        .map(|s| map_boundary(&map, s.start, new_n)..map_boundary(&map, s.end, new_n))
        .collect();

    let mut stats = EditStats::default();
    let mut ents = Vec::with_capacity(doc.ents.len());
    for span in &doc.ents {
        let hit = plan
            .replacements
            .iter()
            .find(|r| r.range.start < span.end && span.start < r.range.end);
        match hit {
            None => ents.push(Span::new(
                map[span.start],
                map_boundary(&map, span.end, new_n),
                span.label.clone(),
            )),
            Some(r) if r.range == span.range() && r.span_policy == SpanPolicy::Transfer => {
                let anchor = map[r.range.start];
                ents.push(Span::new(
                    anchor,
                    anchor + r.new_tokens.len(),
                    span.label.clone(),
                ));
                stats.spans_transferred += 1;
            }
            Some(_) => stats.spans_dropped += 1,
        }
    }

    Ok(Edited {
        doc: Document::assemble(tokens, sents, ents),
        stats,
    })
}
