//! Structured text augmentation.
//!
//! Augmenters take an annotated [`Document`] (tokens with lemma, UPOS and
//! dependency annotations, sentence boundaries and entity spans) and return
//! new documents whose annotations stay aligned with the changed text. The
//! input is never modified.
//!
//! ```
//! use std::sync::Arc;
//! use textaug::augment::{Augmenter, EntityReplace, Level};
//! use textaug::{Annotations, Document, NameLists, Span};
//! use rand::SeedableRng;
//!
//! let doc = Document::from_tokens(
//!     &["Jane", "Doe", "sleeps", "."],
//!     &[true, true, true, false],
//!     Annotations {
//!         heads: Some(vec![Some(2), Some(0), None, Some(2)]),
//!         ..Default::default()
//!     },
//!     vec![0..4],
//!     vec![Span::new(0, 2, "PER")],
//! )?;
//! let names = Arc::new(NameLists::from_json(r#"{"PER": [["John"]]}"#)?);
//! let aug = EntityReplace::new(Level::new(1.0)?, names);
//! let out = aug.augment(&doc, &mut rand_chacha::ChaCha8Rng::seed_from_u64(0))?;
//! assert_eq!(out.doc.text, "John sleeps .");
//! assert_eq!(out.doc.ents, vec![Span::new(0, 1, "PER")]);
//! assert_eq!(out.doc.tokens[0].head, Some(1));
//! # Ok::<(), textaug::Error>(())
//! ```

pub mod augment;
pub mod doc;
pub mod edit;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod resources;
pub mod synth;
pub mod validate;

pub use doc::{text_of, Annotations, Document, Span, Token};
pub use edit::{
    apply_edits, compute_token_map, span_root, EditPlan, NewToken, Replacement, SpanPolicy,
};
pub use error::{Error, Result};
pub use io::CorpusFormat;
pub use pipeline::{run_corpus, run_corpus_serial, Pipeline, PipelineNode, RunStats};
pub use resources::{EmbeddingTable, KeyboardLayout, NameLists, ResourceStore, SynonymLexicon};
pub use validate::{validate, FindingCode, ValidationReport};

/// Single-precision embedding table, the default for loaded resources.
pub type Embeddings = EmbeddingTable<f32>;
/// Double-precision embedding table.
pub type Embeddings64 = EmbeddingTable<f64>;
