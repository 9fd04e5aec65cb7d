//! Static word vectors with exact cosine nearest-neighbour search.
//!
//! The table is generic over the float type; see the `Embeddings` and
//! `Embeddings64` aliases at the crate root.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::path::Path;

use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EmbeddingTable<F> {
    words: Vec<String>,
    index: HashMap<String, usize>,
    dim: usize,
    data: Vec<F>,
    norms: Vec<F>,
}

impl<F: Float> EmbeddingTable<F> {
    /// Builds a table from `(word, vector)` rows.
    pub fn new(rows: Vec<(String, Vec<F>)>) -> Result<Self> {
        let dim = rows.first().map_or(0, |(_, v)| v.len());
        if rows.is_empty() {
            return Err(Error::InvalidResource("embedding table is empty".into()));
        }
        if dim == 0 {
            return Err(Error::DimMismatch {
                line: 1,
                expected: 1,
                found: 0,
            });
        }
        let mut table = EmbeddingTable {
            words: Vec::with_capacity(rows.len()),
            index: HashMap::with_capacity(rows.len()),
            dim,
            data: Vec::with_capacity(rows.len() * dim),
            norms: Vec::with_capacity(rows.len()),
        };
        for (line, (word, vector)) in rows.into_iter().enumerate() {
            table.push(line + 1, word, &vector)?;
        }
        Ok(table)
    }

    fn push(&mut self, line: usize, word: String, vector: &[F]) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::DimMismatch {
                line,
                expected: self.dim,
                found: vector.len(),
            });
        }
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse {
                line,
                message: format!("non-finite component in vector for '{}'", word),
            });
        }
        let norm = vector.iter().fold(F::zero(), |acc, &x| acc + x * x).sqrt();
        if norm == F::zero() {
            return Err(Error::ZeroVector { line, word });
        }
        if self.index.contains_key(&word) {
            return Err(Error::InvalidResource(format!(
                "line {}: duplicate word '{}'",
                line, word
            )));
        }
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.data.extend_from_slice(vector);
        self.norms.push(norm);
        Ok(())
    }

    /// Parses the word2vec text format: an optional `V d` header, then one
    /// word followed by `d` numbers per line.
    pub fn from_text(source: &str) -> Result<Self> {
        let mut lines = source
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty())
            .peekable();

        let mut header = None;
        if let Some(&(_, first)) = lines.peek() {
            let fields: Vec<&str> = first.split_whitespace().collect();
            if let [v, d] = fields.as_slice() {
                if let (Ok(v), Ok(d)) = (v.parse::<usize>(), d.parse::<usize>()) {
                    header = Some((v, d));
                    lines.next();
                }
            }
        }

        let mut table: Option<EmbeddingTable<F>> = None;
        for (line, text) in lines {
            let mut fields = text.split_whitespace();
            let word = fields.next().unwrap_or_default().to_string();
            let vector = fields
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .and_then(F::from)
                        .ok_or_else(|| Error::Parse {
                            line,
                            message: format!("invalid number {:?}", f),
                        })
                })
                .collect::<Result<Vec<F>>>()?;
            match table.as_mut() {
                Some(t) => t.push(line, word, &vector)?,
                None => {
                    let dim = header.map_or(vector.len(), |(_, d)| d);
                    if dim == 0 || vector.len() != dim {
                        return Err(Error::DimMismatch {
                            line,
                            expected: dim.max(1),
                            found: vector.len(),
                        });
                    }
                    let mut t = EmbeddingTable {
                        words: Vec::new(),
                        index: HashMap::new(),
                        dim,
                        data: Vec::new(),
                        norms: Vec::new(),
                    };
                    t.push(line, word, &vector)?;
                    table = Some(t);
                }
            }
        }
        let table =
            table.ok_or_else(|| Error::InvalidResource("embedding table is empty".into()))?;
        if let Some((v, _)) = header {
            if v != table.len() {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("header announces {} words but {} were read", v, table.len()),
                });
            }
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: {}", path.display(), e),
        })?;
        Self::from_text(&source)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn vector(&self, word: &str) -> Option<&[F]> {
        self.lookup(word)
            .map(|i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    /// Index of `word`, tried verbatim and then lowercased.
    fn lookup(&self, word: &str) -> Option<usize> {
        self.index
            .get(word)
            .or_else(|| self.index.get(&word.to_lowercase()))
            .copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.lookup(word).is_some()
    }

    /// The `min(k, |V| - 1)` most cosine-similar words to `word`, most similar
    /// first, with ties broken by ascending word. The query is excluded.
    pub fn knn_scored(&self, word: &str, k: usize) -> Result<Vec<(&str, F)>> {
        if k == 0 {
            return Err(Error::InvalidParam("k must be at least 1".into()));
        }
        let q = self
            .lookup(word)
            .ok_or_else(|| Error::Oov(word.to_string()))?;
        let qv = &self.data[q * self.dim..(q + 1) * self.dim];
        let qn = self.norms[q];

        let mut scored: Vec<(usize, F)> = (0..self.len())
            .filter(|&i| i != q)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                let dot = row
                    .iter()
                    .zip(qv)
                    .fold(F::zero(), |acc, (&a, &b)| acc + a * b);
                (i, dot / (self.norms[i] * qn))
            })
            .collect();

        let cmp = |a: &(usize, F), b: &(usize, F)| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| self.words[a.0].cmp(&self.words[b.0]))
        };
        let k = k.min(scored.len());
        if k < scored.len() {
            scored.select_nth_unstable_by(k, cmp);
            scored.truncate(k);
        }
        scored.sort_unstable_by(cmp);
        Ok(scored
            .into_iter()
            .map(|(i, s)| (self.words[i].as_str(), s))
            .collect())
    }

    pub fn knn(&self, word: &str, k: usize) -> Result<Vec<&str>> {
        Ok(self
            .knn_scored(word, k)?
            .into_iter()
            .map(|(w, _)| w)
            .collect())
    }
}
