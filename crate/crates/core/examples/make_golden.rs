//! Regenerates the golden corpora under `tests/data`.
//!
//! cargo run -p textaug --example make_golden

use std::fs;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use textaug::io::{emit_conllu, emit_jsonl};
use textaug::synth::{random_document, SynthConfig};
use textaug::{Annotations, Document, Span};

fn jane_doe() -> Document {
    Document::from_tokens(
        &["Jane", "Doe", "sleeps", "."],
        &[true, true, false, false],
        Annotations {
            lemmas: Some(vec![
                "Jane".into(),
                "Doe".into(),
                "sleep".into(),
                ".".into(),
            ]),
            upos: Some(vec![
                "PROPN".into(),
                "PROPN".into(),
                "VERB".into(),
                "PUNCT".into(),
            ]),
            heads: Some(vec![Some(2), Some(0), None, Some(2)]),
            deprels: Some(vec![
                "nsubj".into(),
                "flat".into(),
                "root".into(),
                "punct".into(),
            ]),
        },
        vec![0..4],
        vec![Span::new(0, 2, "PER")],
    )
    .expect("valid")
}

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    fs::create_dir_all(&dir).unwrap();

    let mut docs = vec![jane_doe()];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let config = SynthConfig::default();
    while docs.len() < 100 {
        docs.push(random_document(&mut rng, &config));
    }
    fs::write(dir.join("golden.jsonl"), emit_jsonl(&docs)).unwrap();

    let mut docs = vec![jane_doe()];
    let mut sents = 1;
    while sents < 100 {
        let config = SynthConfig {
            max_sents: (100 - sents).min(4),
            empty_doc_prob: 0.0,
            ..SynthConfig::default()
        };
        let doc = random_document(&mut rng, &config);
        sents += doc.sents.len();
        docs.push(doc);
    }
    fs::write(dir.join("golden.conllu"), emit_conllu(&docs).unwrap().text).unwrap();
}
