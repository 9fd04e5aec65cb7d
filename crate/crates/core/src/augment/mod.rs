//! Augmenters: functions from an annotated document and a random stream to
//! a new, valid annotated document.
//!
//! Every augmenter walks its eligible units (characters, tokens, token
//! pairs, spans or the whole document) in document order and makes the same
//! draws for every unit whether or not the unit fires, so the output is a
//! pure function of the document and the stream state.

mod chars;
mod replace;
mod structure;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

pub use chars::{CaseMode, Casing, CharSwap, KeystrokeError, SpacingRemoval};
pub use replace::{
    apply_case, case_pattern, CasePattern, EmbeddingSource, EntityReplace, LexiconSource,
    ReplacementSource, WordList, WordReplace,
};
pub use structure::{SentenceShuffle, TokenSwap};

use crate::doc::Document;
use crate::error::{Error, Result};
use crate::resources::ResourceStore;

/// Per-unit firing probability in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Level(f64);

impl Level {
    pub fn new(p: f64) -> Result<Level> {
        if (0.0..=1.0).contains(&p) {
            Ok(Level(p))
        } else {
            Err(Error::InvalidParam(format!(
                "probability {} is outside [0, 1]",
                p
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// One Bernoulli draw. Always consumes exactly one `f64` from `rng`.
    pub fn draw(self, rng: &mut dyn RngCore) -> bool {
        rng.gen::<f64>() < self.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An augmented document with bookkeeping for run statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub doc: Document,
    pub tokens_modified: usize,
    pub spans_dropped: usize,
    /// Entity spans left alone because no resource covered their label.
    pub spans_skipped: usize,
}

impl Outcome {
    pub fn unchanged(doc: &Document) -> Outcome {
        Outcome {
            doc: doc.clone(),
            tokens_modified: 0,
            spans_dropped: 0,
            spans_skipped: 0,
        }
    }
}

pub trait Augmenter: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome>;
}

/// Declarative description of an augmenter, resolved against a
/// [`ResourceStore`] by [`AugmenterSpec::build`].
#[derive(Clone, Debug, PartialEq)]
pub enum AugmenterSpec {
    KeystrokeError {
        level: f64,
        layout: String,
    },
    CharSwap {
        level: f64,
    },
    Casing {
        level: f64,
        mode: CaseMode,
    },
    SpacingRemoval {
        level: f64,
    },
    WordlistReplace {
        level: f64,
        words: BTreeMap<String, Vec<String>>,
    },
    SynonymReplace {
        level: f64,
        lexicon: String,
    },
    EmbeddingReplace {
        level: f64,
        embeddings: String,
        k: usize,
    },
    TokenSwap {
        level: f64,
    },
    EntityReplace {
        level: f64,
        names: String,
    },
    SentenceShuffle {
        level: f64,
    },
}

impl AugmenterSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AugmenterSpec::KeystrokeError { .. } => "keystroke_error",
            AugmenterSpec::CharSwap { .. } => "char_swap",
            AugmenterSpec::Casing { .. } => "casing",
            AugmenterSpec::SpacingRemoval { .. } => "spacing_removal",
            AugmenterSpec::WordlistReplace { .. } => "wordlist_replace",
            AugmenterSpec::SynonymReplace { .. } => "synonym_replace",
            AugmenterSpec::EmbeddingReplace { .. } => "embedding_replace",
            AugmenterSpec::TokenSwap { .. } => "token_swap",
            AugmenterSpec::EntityReplace { .. } => "entity_replace",
            AugmenterSpec::SentenceShuffle { .. } => "sentence_shuffle",
        }
    }

    pub fn level(&self) -> f64 {
        match *self {
            AugmenterSpec::KeystrokeError { level, .. }
            | AugmenterSpec::CharSwap { level }
            | AugmenterSpec::Casing { level, .. }
            | AugmenterSpec::SpacingRemoval { level }
            | AugmenterSpec::WordlistReplace { level, .. }
            | AugmenterSpec::SynonymReplace { level, .. }
            | AugmenterSpec::EmbeddingReplace { level, .. }
            | AugmenterSpec::TokenSwap { level }
            | AugmenterSpec::EntityReplace { level, .. }
            | AugmenterSpec::SentenceShuffle { level } => level,
        }
    }

    pub fn build(&self, store: &mut ResourceStore) -> Result<Arc<dyn Augmenter>> {
        let level = Level::new(self.level())?;
        Ok(match self {
            AugmenterSpec::KeystrokeError { layout, .. } => {
                Arc::new(KeystrokeError::new(level, store.layout(layout)?))
            }
            AugmenterSpec::CharSwap { .. } => Arc::new(CharSwap::new(level)),
            AugmenterSpec::Casing { mode, .. } => Arc::new(Casing::new(level, *mode)),
            AugmenterSpec::SpacingRemoval { .. } => Arc::new(SpacingRemoval::new(level)),
            AugmenterSpec::WordlistReplace { words, .. } => Arc::new(WordReplace::new(
                "wordlist_replace",
                level,
                WordList::new(words.clone())?,
            )),
            AugmenterSpec::SynonymReplace { lexicon, .. } => Arc::new(WordReplace::new(
                "synonym_replace",
                level,
                LexiconSource::new(store.synonyms(lexicon)?),
            )),
            AugmenterSpec::EmbeddingReplace { embeddings, k, .. } => Arc::new(WordReplace::new(
                "embedding_replace",
                level,
                EmbeddingSource::new(store.embeddings(embeddings)?, *k)?,
            )),
            AugmenterSpec::TokenSwap { .. } => Arc::new(TokenSwap::new(level)),
            AugmenterSpec::EntityReplace { names, .. } => {
                Arc::new(EntityReplace::new(level, store.names(names)?))
            }
            AugmenterSpec::SentenceShuffle { .. } => Arc::new(SentenceShuffle::new(level)),
        })
    }
}
