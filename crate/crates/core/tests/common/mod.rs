#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use textaug::augment::{Augmenter, AugmenterSpec, CaseMode};
use textaug::synth::VOCABULARY;
use textaug::{Document, Embeddings, ResourceStore};

pub fn shipped_resources() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("resources")
}

/// A small embedding table over the synthetic vocabulary.
pub fn vocab_embeddings(seed: u64) -> Embeddings {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<String> = VOCABULARY.iter().map(|(w, _)| w.to_lowercase()).collect();
    words.sort();
    words.dedup();
    let rows = words
        .into_iter()
        .map(|w| {
            let v: Vec<f32> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (w, v)
        })
        .collect();
    Embeddings::new(rows).unwrap()
}

pub fn store() -> ResourceStore {
    let mut store = ResourceStore::with_dir(shipped_resources());
    store.insert_embeddings("vocab", vocab_embeddings(17));
    store
}

pub fn specs(level: f64) -> Vec<AugmenterSpec> {
    vec![
        AugmenterSpec::KeystrokeError {
            level,
            layout: "azerty_fr".into(),
        },
        AugmenterSpec::KeystrokeError {
            level,
            layout: "qwerty_en".into(),
        },
        AugmenterSpec::CharSwap { level },
        AugmenterSpec::Casing {
            level,
            mode: CaseMode::Upper,
        },
        AugmenterSpec::Casing {
            level,
            mode: CaseMode::Lower,
        },
        AugmenterSpec::Casing {
            level,
            mode: CaseMode::Random,
        },
        AugmenterSpec::SpacingRemoval { level },
        AugmenterSpec::WordlistReplace {
            level,
            words: [(
                "cat".to_string(),
                vec!["feline".to_string(), "kitty".to_string()],
            )]
            .into_iter()
            .collect(),
        },
        AugmenterSpec::SynonymReplace {
            level,
            lexicon: "basic_en".into(),
        },
        AugmenterSpec::EmbeddingReplace {
            level,
            embeddings: "vocab".into(),
            k: 3,
        },
        AugmenterSpec::TokenSwap { level },
        AugmenterSpec::EntityReplace {
            level,
            names: "names_en".into(),
        },
        AugmenterSpec::SentenceShuffle { level },
    ]
}

pub fn augmenters(level: f64) -> Vec<Arc<dyn Augmenter>> {
    let mut store = store();
    specs(level)
        .iter()
        .map(|s| s.build(&mut store).unwrap())
        .collect()
}

/// Brute-force tree check, independent of `validate`: in every sentence
/// exactly one token has no head, every head stays in the sentence, and
/// following heads from any token reaches the root within `len` steps.
pub fn trees_ok(doc: &Document) -> bool {
    for sent in &doc.sents {
        let roots: Vec<usize> = sent
            .clone()
            .filter(|&i| doc.tokens[i].head.is_none())
            .collect();
        if roots.len() != 1 {
            return false;
        }
        for i in sent.clone() {
            let mut cur = i;
            let mut steps = 0;
            while let Some(h) = doc.tokens[cur].head {
                if !sent.contains(&h) || steps > sent.len() {
                    return false;
                }
                cur = h;
                steps += 1;
            }
            if cur != roots[0] {
                return false;
            }
        }
    }
    true
}
