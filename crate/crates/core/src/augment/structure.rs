//! Augmenters that permute tokens or sentences.

use rand::seq::SliceRandom;
use rand::RngCore;

use super::{Augmenter, Level, Outcome};
use crate::doc::{Document, Span};
use crate::error::Result;

/// Reorders tokens so that new position `p` holds old token `order[p]`.
///
/// Whitespace flags stay with positions unless `keep_ws` is set for an old
/// index, in which case that token carries its own flag along.
fn permute(
    doc: &Document,
    order: &[usize],
    keep_ws: impl Fn(usize) -> bool,
) -> Vec<crate::doc::Token> {
    let mut new_pos = vec![0; order.len()];
    for (p, &old) in order.iter().enumerate() {
        new_pos[old] = p;
    }
    order
        .iter()
        .enumerate()
        .map(|(p, &old)| {
            let mut token = doc.tokens[old].clone();
            if !keep_ws(old) {
                token.ws = doc.tokens[p].ws;
            }
            token.head = token.head.map(|h| new_pos[h]);
            token
        })
        .collect()
}

/// Swaps adjacent tokens within a sentence. Tokens inside entity spans never move.
#[derive(Debug, Clone)]
pub struct TokenSwap {
    level: Level,
}

impl TokenSwap {
    pub fn new(level: Level) -> Self {
        TokenSwap { level }
    }
}

impl Augmenter for TokenSwap {
    fn name(&self) -> &str {
        "token_swap"
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let mut in_entity = vec![false; doc.tokens.len()];
        for span in &doc.ents {
            for flag in &mut in_entity[span.start..span.end] {
                *flag = true;
            }
        }
        let mut order: Vec<usize> = (0..doc.tokens.len()).collect();
        let mut swaps = 0;
        for sent in &doc.sents {
            let mut i = sent.start;
            while i + 1 < sent.end {
                if in_entity[i] || in_entity[i + 1] {
                    i += 1;
                    continue;
                }
                if self.level.draw(rng) {
                    order.swap(i, i + 1);
                    swaps += 1;
                }
                i += 2;
            }
        }
        if swaps == 0 {
            return Ok(Outcome::unchanged(doc));
        }
        let tokens = permute(doc, &order, |_| false);
        Ok(Outcome {
            doc: Document::assemble(tokens, doc.sents.clone(), doc.ents.clone()),
            tokens_modified: 2 * swaps,
            spans_dropped: 0,
            spans_skipped: 0,
        })
    }
}

/// Shuffles the order of sentences.
///
/// Token blocks move wholesale with their annotations. The whitespace flag
/// after each sentence belongs to the sentence slot, so the document keeps
/// its inter-sentence spacing and trailing-space behaviour.
#[derive(Debug, Clone)]
pub struct SentenceShuffle {
    level: Level,
}

impl SentenceShuffle {
    pub fn new(level: Level) -> Self {
        SentenceShuffle { level }
    }
}

impl Augmenter for SentenceShuffle {
    fn name(&self) -> &str {
        "sentence_shuffle"
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let m = doc.sents.len();
        if m < 2 {
            return Ok(Outcome::unchanged(doc));
        }
        let fire = self.level.draw(rng);
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(rng);
        if !fire || perm.iter().enumerate().all(|(i, &s)| i == s) {
            return Ok(Outcome::unchanged(doc));
        }

        let order: Vec<usize> = perm.iter().flat_map(|&s| doc.sents[s].clone()).collect();
        let mut new_pos = vec![0; order.len()];
        for (p, &old) in order.iter().enumerate() {
            new_pos[old] = p;
        }
        let mut tokens = permute(doc, &order, |_| true);

        let mut sents = Vec::with_capacity(m);
        let mut start = 0;
        for (slot, &s) in perm.iter().enumerate() {
            let end = start + doc.sents[s].len();
            tokens[end - 1].ws = doc.tokens[doc.sents[slot].end - 1].ws;
            sents.push(start..end);
            start = end;
        }

        let mut ents: Vec<Span> = doc
            .ents
            .iter()
            .map(|e| Span::new(new_pos[e.start], new_pos[e.end - 1] + 1, e.label.clone()))
            .collect();
        ents.sort();

        Ok(Outcome {
            doc: Document::assemble(tokens, sents, ents),
            tokens_modified: doc.tokens.len(),
            spans_dropped: 0,
            spans_skipped: 0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::Annotations;
    use crate::validate::validate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn level(p: f64) -> Level {
        Level::new(p).unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    fn cat() -> Document {
        Document::from_tokens(
            &["the", "cat", "sleeps"],
            &[true, true, false],
            Annotations {
                heads: Some(vec![Some(1), Some(2), None]),
                deprels: Some(vec!["det".into(), "nsubj".into(), "root".into()]),
                ..Default::default()
            },
            vec![0..3],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn token_swap_permutes_heads() {
        let out = TokenSwap::new(level(1.0))
            .augment(&cat(), &mut rng())
            .unwrap()
            .doc;
        assert_eq!(out.text, "cat the sleeps");
        // "the" now at 1 still attaches to "cat" now at 0
        assert_eq!(out.tokens[1].form, "the");
        assert_eq!(out.tokens[1].head, Some(0));
        assert_eq!(out.tokens[0].head, Some(2));
        assert_eq!(out.tokens[2].head, None);
        assert!(validate(&out).is_empty());
    }

    #[test]
    fn token_swap_ineligible_cases() {
        let single = Document::from_tokens(
            &["Hi"],
            &[false],
            Annotations::default(),
            vec![0..1],
            vec![],
        )
        .unwrap();
        assert_eq!(
            TokenSwap::new(level(1.0))
                .augment(&single, &mut rng())
                .unwrap()
                .doc,
            single
        );

        let mut d = cat();
        d.ents = vec![Span::new(0, 2, "PER")];
        let out = TokenSwap::new(level(1.0)).augment(&d, &mut rng()).unwrap();
        assert_eq!(out.doc, d);

        assert_eq!(
            TokenSwap::new(level(0.0))
                .augment(&cat(), &mut rng())
                .unwrap()
                .doc,
            cat()
        );
    }

    fn three_sents() -> Document {
        Document::from_tokens(
            &["Hi", ".", "Jane", "left", ".", "Bye"],
            &[false, true, true, false, true, false],
            Annotations {
                heads: Some(vec![None, Some(0), Some(3), None, Some(3), None]),
                ..Default::default()
            },
            vec![0..2, 2..5, 5..6],
            vec![Span::new(2, 3, "PER")],
        )
        .unwrap()
    }

    #[test]
    fn sentence_shuffle_preserves_sentences() {
        let d = three_sents();
        let mut texts: Vec<String> = d.sents.iter().map(|s| d.range_text(s.clone())).collect();
        texts.sort();
        let mut saw_change = false;
        for seed in 0..20 {
            let out = SentenceShuffle::new(level(1.0))
                .augment(&d, &mut ChaCha8Rng::seed_from_u64(seed))
                .unwrap()
                .doc;
            assert!(validate(&out).is_empty(), "{:?}", validate(&out));
            let mut out_texts: Vec<String> = out
                .sents
                .iter()
                .map(|s| out.range_text(s.clone()))
                .collect();
            out_texts.sort();
            assert_eq!(out_texts, texts);
            assert_eq!(out.ents.len(), 1);
            assert_eq!(out.range_text(out.ents[0].range()), "Jane");
            assert!(!out.tokens.last().unwrap().ws);
            saw_change |= out != d;
        }
        assert!(saw_change);
    }

    #[test]
    fn sentence_shuffle_trivial_cases() {
        let one = cat();
        assert_eq!(
            SentenceShuffle::new(level(1.0))
                .augment(&one, &mut rng())
                .unwrap()
                .doc,
            one
        );
        let d = three_sents();
        assert_eq!(
            SentenceShuffle::new(level(0.0))
                .augment(&d, &mut rng())
                .unwrap()
                .doc,
            d
        );
    }
}
