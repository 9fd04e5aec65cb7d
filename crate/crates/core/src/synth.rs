//! Random valid documents for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::doc::{Document, Span, Token, ROOT_DEPREL};

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub max_sents: usize,
    pub max_sent_len: usize,
    /// Chance that a document has no tokens at all.
    pub empty_doc_prob: f64,
    /// Chance that a candidate entity span is placed.
    pub entity_prob: f64,
    pub no_space_prob: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_sents: 5,
            max_sent_len: 8,
            empty_doc_prob: 0.02,
            entity_prob: 0.3,
            no_space_prob: 0.1,
        }
    }
}

/// (form, upos) pairs; a mix of cases, scripts and punctuation.
pub const VOCABULARY: &[(&str, &str)] = &[
    ("the", "DET"),
    ("The", "DET"),
    ("a", "DET"),
    ("cat", "NOUN"),
    ("house", "NOUN"),
    ("car", "NOUN"),
    ("dog", "NOUN"),
    ("happy", "ADJ"),
    ("Happy", "ADJ"),
    ("BIG", "ADJ"),
    ("small", "ADJ"),
    ("quick", "ADJ"),
    ("sleeps", "VERB"),
    ("walk", "VERB"),
    ("said", "VERB"),
    ("begin", "VERB"),
    ("is", "AUX"),
    ("and", "CCONJ"),
    ("in", "ADP"),
    ("of", "ADP"),
    ("Jane", "PROPN"),
    ("Doe", "PROPN"),
    ("Paris", "PROPN"),
    ("Acme", "PROPN"),
    ("Zoë", "PROPN"),
    ("café", "NOUN"),
    ("naïve", "ADJ"),
    ("straße", "NOUN"),
    ("42", "NUM"),
    ("2024", "NUM"),
    (".", "PUNCT"),
    (",", "PUNCT"),
    ("!", "PUNCT"),
    ("«", "PUNCT"),
    ("»", "PUNCT"),
    ("don't", "VERB"),
    ("e-mail", "NOUN"),
    ("ÉTÉ", "NOUN"),
    ("x", "X"),
];

const DEPRELS: &[&str] = &[
    "nsubj", "obj", "det", "amod", "nmod", "advmod", "punct", "case", "conj", "flat",
];
const LABELS: &[&str] = &["PER", "LOC", "ORG", "MISC"];

/// Draws a valid document: random sentence lengths, random dependency trees
/// and random non-overlapping single-sentence entity spans.
pub fn random_document<R: Rng + ?Sized>(rng: &mut R, config: &SynthConfig) -> Document {
    if rng.gen::<f64>() < config.empty_doc_prob {
        return Document::default();
    }
    let n_sents = rng.gen_range(1..=config.max_sents.max(1));
    let mut tokens = Vec::new();
    let mut sents = Vec::with_capacity(n_sents);
    let mut ents = Vec::new();

    for _ in 0..n_sents {
        let start = tokens.len();
        let len = rng.gen_range(1..=config.max_sent_len.max(1));

        // random recursive tree over a shuffled order; the first node is the root
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(rng);
        let mut heads = vec![None; len];
        for k in 1..len {
            let parent = order[rng.gen_range(0..k)];
            heads[order[k]] = Some(start + parent);
        }

        for head in heads {
            let (form, upos) = VOCABULARY[rng.gen_range(0..VOCABULARY.len())];
            let deprel = match head {
                None => ROOT_DEPREL,
                Some(_) => DEPRELS[rng.gen_range(0..DEPRELS.len())],
            };
            let ws = rng.gen::<f64>() >= config.no_space_prob;
            tokens.push(Token::new(
                form,
                ws,
                form.to_lowercase(),
                upos,
                head,
                deprel,
            ));
        }
        let end = tokens.len();
        sents.push(start..end);

        let mut i = start;
        while i < end {
            if rng.gen::<f64>() < config.entity_prob {
                let span_len = rng.gen_range(1..=3.min(end - i));
                ents.push(Span::new(
                    i,
                    i + span_len,
                    LABELS[rng.gen_range(0..LABELS.len())],
                ));
                i += span_len + 1;
            } else {
                i += 1;
            }
        }
    }
    if let Some(last) = tokens.last_mut() {
        last.ws = false;
    }
    Document::assemble(tokens, sents, ents)
}

/// `n` documents from a seeded stream.
pub fn random_corpus(seed: u64, n: usize, config: &SynthConfig) -> Vec<Document> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_document(&mut rng, config)).collect()
}
