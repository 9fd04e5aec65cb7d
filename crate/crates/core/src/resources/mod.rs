//! External linguistic resources and their resolution by id.
//!
//! Resource ids map to files in a resource directory:
//!
//! | kind       | file                  |
//! |------------|-----------------------|
//! | layout     | `<id>.layout.json`    |
//! | name list  | `<id>.names.json`     |
//! | synonyms   | `<id>.synonyms.tsv`   |
//! | embeddings | `<id>.vec`            |
//!
//! The `qwerty_en` and `azerty_fr` layouts are built in and used when the
//! directory has no file of that name.

mod embeddings;
mod keyboard;
mod lexicon;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub use embeddings::EmbeddingTable;
pub use keyboard::{KeyboardLayout, AZERTY_FR, QWERTY_EN};
pub use lexicon::{NameLists, SynonymLexicon};

use crate::error::{Error, Result};
use crate::Embeddings;

pub const LAYOUT_EXT: &str = "layout.json";
pub const NAMES_EXT: &str = "names.json";
pub const SYNONYMS_EXT: &str = "synonyms.tsv";
pub const EMBEDDINGS_EXT: &str = "vec";

/// Loads resources by id on first use and caches them.
#[derive(Debug, Default)]
pub struct ResourceStore {
    dir: Option<PathBuf>,
    layouts: HashMap<String, Arc<KeyboardLayout>>,
    names: HashMap<String, Arc<NameLists>>,
    synonyms: HashMap<String, Arc<SynonymLexicon>>,
    embeddings: HashMap<String, Arc<Embeddings>>,
}

fn builtin_layout(id: &str) -> Option<&'static str> {
    match id {
        "qwerty_en" => Some(QWERTY_EN),
        "azerty_fr" => Some(AZERTY_FR),
        _ => None,
    }
}

impl ResourceStore {
    /// A store with only the built-in layouts.
    pub fn builtin() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        ResourceStore {
            dir: Some(dir.into()),
            ..Self::default()
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn file(&self, id: &str, ext: &str) -> Option<PathBuf> {
        if id.is_empty() || id.contains(['/', '\\']) || id.starts_with('.') {
            return None;
        }
        let path = self.dir.as_ref()?.join(format!("{}.{}", id, ext));
        path.is_file().then_some(path)
    }

    fn read(&self, kind: &'static str, id: &str, ext: &str) -> Result<Option<String>> {
        match self.file(id, ext) {
            Some(path) => std::fs::read_to_string(&path)
                .map(Some)
                .map_err(|e| Error::InvalidResource(format!("{} '{}': {}", kind, id, e))),
            None => Ok(None),
        }
    }

    pub fn insert_layout(&mut self, id: impl Into<String>, layout: KeyboardLayout) {
        self.layouts.insert(id.into(), Arc::new(layout));
    }

    pub fn insert_names(&mut self, id: impl Into<String>, names: NameLists) {
        self.names.insert(id.into(), Arc::new(names));
    }

    pub fn insert_synonyms(&mut self, id: impl Into<String>, lexicon: SynonymLexicon) {
        self.synonyms.insert(id.into(), Arc::new(lexicon));
    }

    pub fn insert_embeddings(&mut self, id: impl Into<String>, table: Embeddings) {
        self.embeddings.insert(id.into(), Arc::new(table));
    }

    pub fn layout(&mut self, id: &str) -> Result<Arc<KeyboardLayout>> {
        if let Some(layout) = self.layouts.get(id) {
            return Ok(layout.clone());
        }
        let source = match self.read("layout", id, LAYOUT_EXT)? {
            Some(source) => source,
            None => builtin_layout(id)
                .ok_or_else(|| Error::UnknownResource {
                    kind: "layout",
                    id: id.to_string(),
                })?
                .to_string(),
        };
        let layout = Arc::new(
            KeyboardLayout::from_json(&source).map_err(|e| resource_error("layout", id, e))?,
        );
        self.layouts.insert(id.to_string(), layout.clone());
        Ok(layout)
    }

    pub fn names(&mut self, id: &str) -> Result<Arc<NameLists>> {
        if let Some(names) = self.names.get(id) {
            return Ok(names.clone());
        }
        let source =
            self.read("name list", id, NAMES_EXT)?
                .ok_or_else(|| Error::UnknownResource {
                    kind: "name list",
                    id: id.to_string(),
                })?;
        let names = Arc::new(
            NameLists::from_json(&source).map_err(|e| resource_error("name list", id, e))?,
        );
        self.names.insert(id.to_string(), names.clone());
        Ok(names)
    }

    pub fn synonyms(&mut self, id: &str) -> Result<Arc<SynonymLexicon>> {
        if let Some(lexicon) = self.synonyms.get(id) {
            return Ok(lexicon.clone());
        }
        let source =
            self.read("lexicon", id, SYNONYMS_EXT)?
                .ok_or_else(|| Error::UnknownResource {
                    kind: "lexicon",
                    id: id.to_string(),
                })?;
        let lexicon = Arc::new(
            SynonymLexicon::from_tsv(&source).map_err(|e| resource_error("lexicon", id, e))?,
        );
        self.synonyms.insert(id.to_string(), lexicon.clone());
        Ok(lexicon)
    }

    pub fn embeddings(&mut self, id: &str) -> Result<Arc<Embeddings>> {
        if let Some(table) = self.embeddings.get(id) {
            return Ok(table.clone());
        }
        let source = self
            .read("embeddings", id, EMBEDDINGS_EXT)?
            .ok_or_else(|| Error::UnknownResource {
                kind: "embeddings",
                id: id.to_string(),
            })?;
        let table = Arc::new(
            Embeddings::from_text(&source).map_err(|e| resource_error("embeddings", id, e))?,
        );
        self.embeddings.insert(id.to_string(), table.clone());
        Ok(table)
    }
}

/// Loader errors inside a resource file are reported as resource errors,
/// keeping their specific code where they already are one.
fn resource_error(kind: &str, id: &str, err: Error) -> Error {
    if err.is_resource_error() {
        err
    } else {
        Error::InvalidResource(format!("{} '{}': {}", kind, id, err))
    }
}
