use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

fn check_form(form: &str, what: &str) -> Result<()> {
    if form.is_empty() || form.chars().any(char::is_whitespace) {
        Err(Error::InvalidResource(format!(
            "{} {:?} is empty or contains whitespace",
            what, form
        )))
    } else {
        Ok(())
    }
}

/// Replacement names per entity label; each name is a token-form sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameLists {
    lists: BTreeMap<String, Vec<Vec<String>>>,
}

impl NameLists {
    pub fn new(lists: BTreeMap<String, Vec<Vec<String>>>) -> Result<NameLists> {
        for (label, names) in &lists {
            if names.is_empty() {
                return Err(Error::InvalidResource(format!(
                    "label {} has no names",
                    label
                )));
            }
            for name in names {
                if name.is_empty() {
                    return Err(Error::InvalidResource(format!(
                        "label {} has an empty name",
                        label
                    )));
                }
                for form in name {
                    check_form(form, "name form")?;
                }
            }
        }
        Ok(NameLists { lists })
    }

    pub fn from_json(source: &str) -> Result<NameLists> {
        let lists = serde_json::from_str(source).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        Self::new(lists)
    }

    pub fn get(&self, label: &str) -> Option<&[Vec<String>]> {
        self.lists.get(label).map(Vec::as_slice)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.lists.keys().map(String::as_str)
    }
}

/// Synonyms keyed by lowercase form and UPOS tag.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    entries: HashMap<(String, String), Vec<String>>,
}

impl SynonymLexicon {
    /// Parses rows of `form<TAB>upos<TAB>syn1,syn2,...`. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn from_tsv(source: &str) -> Result<SynonymLexicon> {
        let mut entries: HashMap<(String, String), Vec<String>> = HashMap::new();
        for (idx, line) in source.lines().enumerate() {
            let line_no = idx + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 tab-separated columns, found {}", cols.len()),
                });
            }
            let form = cols[0].trim().to_lowercase();
            let upos = cols[1].trim().to_string();
            check_form(&form, "lexicon form")?;
            if upos.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "empty UPOS column".into(),
                });
            }
            let list = entries.entry((form.clone(), upos)).or_default();
            for syn in cols[2].split(',').map(str::trim) {
                check_form(syn, "synonym")?;
                if syn.to_lowercase() == form {
                    return Err(Error::InvalidResource(format!(
                        "line {}: {:?} lists itself as synonym",
                        line_no, form
                    )));
                }
                if !list.iter().any(|s| s == syn) {
                    list.push(syn.to_string());
                }
            }
        }
        Ok(SynonymLexicon { entries })
    }

    pub fn get(&self, form: &str, upos: &str) -> Option<&[String]> {
        self.entries
            .get(&(form.to_lowercase(), upos.to_string()))
            .map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
