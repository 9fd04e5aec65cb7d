//! Augmenter combinators and the deterministic corpus runner.
//!
//! A [`PipelineNode`] is a tree of leaf augmenters and combinators:
//!
//! - `Combine(children)` threads every output of one child through the next,
//!   so the output count is the product of the children's counts. An empty
//!   combination is the identity.
//! - `Repeat(child, n)` concatenates `n` independent applications of `child`.
//! - `PerDoc(child, p)` makes one Bernoulli(p) draw and applies `child` on
//!   success; otherwise the document passes through unchanged.
//!
//! [`run_corpus`] gives each document its own random stream derived from
//! the run seed and the document ordinal (see [`doc_stream`]), so the result
//! does not depend on scheduling and parallel runs equal serial runs.

mod config;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use config::{parse_config, to_config};

use crate::augment::{Augmenter, AugmenterSpec, Level};
use crate::doc::Document;
use crate::error::{Error, Result};
use crate::resources::ResourceStore;

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineNode {
    Leaf(AugmenterSpec),
    Combine(Vec<PipelineNode>),
    Repeat { child: Box<PipelineNode>, n: usize },
    PerDoc { child: Box<PipelineNode>, p: f64 },
}

impl PipelineNode {
    pub fn leaf(spec: AugmenterSpec) -> Self {
        PipelineNode::Leaf(spec)
    }

    pub fn combine(children: Vec<PipelineNode>) -> Self {
        PipelineNode::Combine(children)
    }

    pub fn repeat(child: PipelineNode, n: usize) -> Self {
        PipelineNode::Repeat {
            child: Box::new(child),
            n,
        }
    }

    pub fn per_doc(child: PipelineNode, p: f64) -> Self {
        PipelineNode::PerDoc {
            child: Box::new(child),
            p,
        }
    }

    /// Resolves resources and checks parameters, producing a runnable pipeline.
    pub fn build(&self, store: &mut ResourceStore) -> Result<Pipeline> {
        Ok(match self {
            PipelineNode::Leaf(spec) => Pipeline::Leaf(spec.build(store)?),
            PipelineNode::Combine(children) => Pipeline::Combine(
                children
                    .iter()
                    .map(|c| c.build(store))
                    .collect::<Result<_>>()?,
            ),
            PipelineNode::Repeat { child, n } => {
                if *n == 0 {
                    return Err(Error::InvalidParam(
                        "repeat count must be at least 1".into(),
                    ));
                }
                Pipeline::Repeat(Box::new(child.build(store)?), *n)
            }
            PipelineNode::PerDoc { child, p } => {
                Pipeline::PerDoc(Box::new(child.build(store)?), Level::new(*p)?)
            }
        })
    }
}

/// Bookkeeping carried along with each output document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub tokens_modified: usize,
    pub spans_dropped: usize,
    pub spans_skipped: usize,
    pub applications: BTreeMap<String, u64>,
}

impl Trace {
    fn then(&self, next: &Trace) -> Trace {
        let mut applications = self.applications.clone();
        for (name, count) in &next.applications {
            *applications.entry(name.clone()).or_default() += count;
        }
        Trace {
            tokens_modified: self.tokens_modified + next.tokens_modified,
            spans_dropped: self.spans_dropped + next.spans_dropped,
            spans_skipped: self.spans_skipped + next.spans_skipped,
            applications,
        }
    }
}

/// A built pipeline with resources attached.
#[derive(Clone, Debug)]
pub enum Pipeline {
    Leaf(Arc<dyn Augmenter>),
    Combine(Vec<Pipeline>),
    Repeat(Box<Pipeline>, usize),
    PerDoc(Box<Pipeline>, Level),
}

impl Pipeline {
    /// The identity pipeline.
    pub fn identity() -> Self {
        Pipeline::Combine(Vec::new())
    }

    pub fn apply(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Vec<Document>> {
        Ok(self
            .apply_traced(doc, rng)?
            .into_iter()
            .map(|(d, _)| d)
            .collect())
    }

    pub fn apply_traced(
        &self,
        doc: &Document,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<(Document, Trace)>> {
        match self {
            Pipeline::Leaf(aug) => {
                let out = aug.augment(doc, rng)?;
                let trace = Trace {
                    tokens_modified: out.tokens_modified,
                    spans_dropped: out.spans_dropped,
                    spans_skipped: out.spans_skipped,
                    applications: BTreeMap::from([(aug.name().to_string(), 1)]),
                };
                Ok(vec![(out.doc, trace)])
            }
            Pipeline::Combine(children) => {
                let mut current = vec![(doc.clone(), Trace::default())];
                for child in children {
                    let mut next = Vec::new();
                    for (d, trace) in &current {
                        for (out, t) in child.apply_traced(d, rng)? {
                            next.push((out, trace.then(&t)));
                        }
                    }
                    current = next;
                }
                Ok(current)
            }
            Pipeline::Repeat(child, n) => {
                let mut out = Vec::new();
                for _ in 0..*n {
                    out.extend(child.apply_traced(doc, rng)?);
                }
                Ok(out)
            }
            Pipeline::PerDoc(child, p) => {
                if p.draw(rng) {
                    child.apply_traced(doc, rng)
                } else {
                    Ok(vec![(doc.clone(), Trace::default())])
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    pub docs_in: usize,
    pub docs_out: usize,
    /// Output documents that differ from their input document.
    pub docs_modified: usize,
    pub tokens_modified: usize,
    pub spans_dropped: usize,
    pub spans_skipped: usize,
    pub applications: BTreeMap<String, u64>,
}

impl RunStats {
    fn record(&mut self, input: &Document, outputs: &[(Document, Trace)]) {
        self.docs_in += 1;
        for (doc, trace) in outputs {
            self.docs_out += 1;
            if doc != input {
                self.docs_modified += 1;
            }
            self.tokens_modified += trace.tokens_modified;
            self.spans_dropped += trace.spans_dropped;
            self.spans_skipped += trace.spans_skipped;
            for (name, count) in &trace.applications {
                *self.applications.entry(name.clone()).or_default() += count;
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed material for document `ordinal` of a run with `seed`.
///
/// `state = mix64(seed) ^ ordinal`; the four 64-bit key words are the
/// next four SplitMix64 outputs from `state` (increment
/// `0x9E3779B97F4A7C15`, finalizer `mix64`), written little-endian.
/// This derivation is part of the output format and must not change.
pub fn stream_seed(seed: u64, ordinal: u64) -> [u8; 32] {
    let mut state = mix64(seed) ^ ordinal;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    key
}

/// The random stream for document `ordinal`: ChaCha8 keyed by [`stream_seed`].
pub fn doc_stream(seed: u64, ordinal: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(stream_seed(seed, ordinal))
}

fn run_one(
    pipeline: &Pipeline,
    doc: &Document,
    seed: u64,
    ordinal: usize,
) -> Result<Vec<(Document, Trace)>> {
    let mut rng = doc_stream(seed, ordinal as u64);
    pipeline
        .apply_traced(doc, &mut rng)
        .map_err(|e| e.in_document(ordinal))
}

fn collect(
    docs: &[Document],
    results: Vec<Result<Vec<(Document, Trace)>>>,
) -> Result<(Vec<Document>, RunStats)> {
    let mut stats = RunStats::default();
    let mut out = Vec::new();
    for (input, result) in docs.iter().zip(results) {
        let outputs = result?;
        stats.record(input, &outputs);
        out.extend(outputs.into_iter().map(|(d, _)| d));
    }
    Ok((out, stats))
}

/// Runs `pipeline` over `docs` in parallel. Output order is input order,
/// with each document's outputs consecutive.
pub fn run_corpus(
    pipeline: &Pipeline,
    docs: &[Document],
    seed: u64,
) -> Result<(Vec<Document>, RunStats)> {
    let results: Vec<_> = docs
        .par_iter()
        .enumerate()
        .map(|(i, doc)| run_one(pipeline, doc, seed, i))
        .collect();
    collect(docs, results)
}

/// Single-threaded [`run_corpus`]; produces identical output.
pub fn run_corpus_serial(
    pipeline: &Pipeline,
    docs: &[Document],
    seed: u64,
) -> Result<(Vec<Document>, RunStats)> {
    let results: Vec<_> = docs
        .iter()
        .enumerate()
        .map(|(i, doc)| run_one(pipeline, doc, seed, i))
        .collect();
    collect(docs, results)
}
