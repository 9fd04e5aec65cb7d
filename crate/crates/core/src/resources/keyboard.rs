use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Physical key adjacency used to simulate typos.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyboardLayout {
    pub name: String,
    neighbors: BTreeMap<char, Vec<char>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayout {
    name: String,
    neighbors: BTreeMap<String, Vec<String>>,
}

fn single_char(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

impl KeyboardLayout {
    pub fn from_json(source: &str) -> Result<KeyboardLayout> {
        let raw: RawLayout = serde_json::from_str(source).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let mut neighbors = BTreeMap::new();
        for (key, list) in raw.neighbors {
            let k = single_char(&key).ok_or_else(|| {
                Error::InvalidLayout(format!("key {:?} is not a single character", key))
            })?;
            if k.to_lowercase().ne(std::iter::once(k)) {
                return Err(Error::InvalidLayout(format!(
                    "key {:?} is not lowercase",
                    key
                )));
            }
            if list.is_empty() {
                return Err(Error::InvalidLayout(format!(
                    "key {:?} has no neighbors",
                    key
                )));
            }
            let mut chars = Vec::with_capacity(list.len());
            for n in &list {
                let c = single_char(n).ok_or_else(|| {
                    Error::InvalidLayout(format!(
                        "neighbor {:?} of {:?} is not a single character",
                        n, key
                    ))
                })?;
                if c == k {
                    return Err(Error::InvalidLayout(format!(
                        "key {:?} lists itself as neighbor",
                        key
                    )));
                }
                chars.push(c);
            }
            neighbors.insert(k, chars);
        }
        Ok(KeyboardLayout {
            name: raw.name,
            neighbors,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<KeyboardLayout> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: {}", path.display(), e),
        })?;
        Self::from_json(&source)
    }

    /// Neighbors of the lowercased character, empty when unmapped.
    pub fn neighbors(&self, ch: char) -> &[char] {
        let mut lower = ch.to_lowercase();
        let key = match (lower.next(), lower.next()) {
            (Some(c), None) => c,
            _ => return &[],
        };
        self.neighbors.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn keys(&self) -> impl Iterator<Item = char> + '_ {
        self.neighbors.keys().copied()
    }
}

pub const QWERTY_EN: &str = include_str!("../../resources/qwerty_en.layout.json");
pub const AZERTY_FR: &str = include_str!("../../resources/azerty_fr.layout.json");
