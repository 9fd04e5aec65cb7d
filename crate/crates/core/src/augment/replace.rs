//! Token- and span-replacement augmenters, all realized through
//! [`apply_edits`](crate::edit::apply_edits).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{Augmenter, Level, Outcome};
use crate::doc::{Document, Token};
use crate::edit::{apply_edits, EditPlan, NewToken, Replacement, SpanPolicy};
use crate::error::{Error, Result};
use crate::resources::{NameLists, SynonymLexicon};
use crate::Embeddings;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CasePattern {
    Upper,
    Title,
    Lower,
}

/// Classifies a form as all-upper (two or more cased characters, all upper),
/// title (first character upper, every other cased character lower) or
/// lower. Anything else counts as lower.
pub fn case_pattern(form: &str) -> CasePattern {
    let mut chars = form.chars();
    let Some(first) = chars.next() else {
        return CasePattern::Lower;
    };
    let cased: Vec<char> = form
        .chars()
        .filter(|c| c.is_uppercase() || c.is_lowercase())
        .collect();
    if cased.len() >= 2 && cased.iter().all(|c| c.is_uppercase()) {
        CasePattern::Upper
    } else if first.is_uppercase() && chars.all(|c| !c.is_uppercase()) {
        CasePattern::Title
    } else {
        CasePattern::Lower
    }
}

pub fn apply_case(pattern: CasePattern, form: &str) -> String {
    match pattern {
        CasePattern::Upper => form.to_uppercase(),
        CasePattern::Lower => form.to_lowercase(),
        CasePattern::Title => {
            let mut chars = form.chars();
            match chars.next() {
                Some(first) => first
                    .to_uppercase()
                    .chain(chars.as_str().to_lowercase().chars())
                    .collect(),
                None => String::new(),
            }
        }
    }
}

/// Supplies replacement candidates for a token. An empty answer makes the
/// token ineligible.
pub trait ReplacementSource: fmt::Debug + Send + Sync {
    fn candidates(&self, token: &Token) -> Vec<String>;
}

/// Candidates looked up by lowercased form, regardless of tag.
#[derive(Clone, Debug, Default)]
pub struct WordList {
    words: BTreeMap<String, Vec<String>>,
}

impl WordList {
    pub fn new(words: BTreeMap<String, Vec<String>>) -> Result<WordList> {
        let mut normalized: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (key, list) in words {
            for cand in &list {
                if cand.is_empty() || cand.chars().any(char::is_whitespace) {
                    return Err(Error::InvalidParam(format!(
                        "replacement {:?} for {:?} is empty or contains whitespace",
                        cand, key
                    )));
                }
            }
            normalized
                .entry(key.to_lowercase())
                .or_default()
                .extend(list);
        }
        Ok(WordList { words: normalized })
    }

    pub fn words(&self) -> &BTreeMap<String, Vec<String>> {
        &self.words
    }
}

impl ReplacementSource for WordList {
    fn candidates(&self, token: &Token) -> Vec<String> {
        self.words
            .get(&token.form.to_lowercase())
            .cloned()
            .unwrap_or_default()
    }
}

/// Synonyms keyed by `(lowercased form, upos)`, falling back to `(lemma, upos)`.
#[derive(Clone, Debug)]
pub struct LexiconSource {
    lexicon: Arc<SynonymLexicon>,
}

impl LexiconSource {
    pub fn new(lexicon: Arc<SynonymLexicon>) -> Self {
        LexiconSource { lexicon }
    }
}

impl ReplacementSource for LexiconSource {
    fn candidates(&self, token: &Token) -> Vec<String> {
        self.lexicon
            .get(&token.form, &token.upos)
            .or_else(|| self.lexicon.get(&token.lemma, &token.upos))
            .map(<[String]>::to_vec)
            .unwrap_or_default()
    }
}

/// The `k` nearest vocabulary words by cosine similarity.
#[derive(Clone, Debug)]
pub struct EmbeddingSource {
    table: Arc<Embeddings>,
    k: usize,
}

impl EmbeddingSource {
    pub fn new(table: Arc<Embeddings>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParam("k must be at least 1".into()));
        }
        Ok(EmbeddingSource { table, k })
    }
}

impl ReplacementSource for EmbeddingSource {
    fn candidates(&self, token: &Token) -> Vec<String> {
        match self.table.knn(&token.form.to_lowercase(), self.k) {
            Ok(words) => words
                .into_iter()
                .filter(|w| !w.is_empty() && !w.chars().any(char::is_whitespace))
                .map(str::to_string)
                .collect(),
            Err(_) => Vec::new(),
        }
    }
}

/// The word-replacement primitive: swaps single tokens for candidates drawn
/// from a [`ReplacementSource`], restoring the original casing pattern.
#[derive(Debug)]
pub struct WordReplace<S> {
    name: String,
    level: Level,
    source: S,
}

impl<S: ReplacementSource> WordReplace<S> {
    pub fn new(name: impl Into<String>, level: Level, source: S) -> Self {
        WordReplace {
            name: name.into(),
            level,
            source,
        }
    }
}

impl<S: ReplacementSource> Augmenter for WordReplace<S> {
    fn name(&self) -> &str {
        &self.name
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let mut replacements = Vec::new();
        for (i, token) in doc.tokens.iter().enumerate() {
            let candidates = self.source.candidates(token);
            if candidates.is_empty() {
                continue;
            }
            let fire = self.level.draw(rng);
            let pick = &candidates[rng.gen_range(0..candidates.len())];
            if !fire {
                continue;
            }
            let form = apply_case(case_pattern(&token.form), pick);
            if form == token.form || form.is_empty() || form.chars().any(char::is_whitespace) {
                continue;
            }
            replacements.push(
                Replacement::new(
                    i..i + 1,
                    vec![NewToken::new(form, token.ws).with_upos(token.upos.clone())],
                )
                .with_policy(SpanPolicy::Transfer),
            );
        }
        if replacements.is_empty() {
            return Ok(Outcome::unchanged(doc));
        }
        let tokens_modified = replacements.len();
        let edited = apply_edits(doc, &EditPlan::new(replacements))?;
        Ok(Outcome {
            doc: edited.doc,
            tokens_modified,
            spans_dropped: edited.stats.spans_dropped,
            spans_skipped: 0,
        })
    }
}

/// Replaces whole entity spans with names drawn from per-label lists.
#[derive(Debug, Clone)]
pub struct EntityReplace {
    level: Level,
    names: Arc<NameLists>,
}

impl EntityReplace {
    pub fn new(level: Level, names: Arc<NameLists>) -> Self {
        EntityReplace { level, names }
    }
}

impl Augmenter for EntityReplace {
    fn name(&self) -> &str {
        "entity_replace"
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let mut replacements = Vec::new();
        let mut skipped = 0;
        let mut tokens_modified = 0;
        for span in &doc.ents {
            let Some(names) = self.names.get(&span.label) else {
                skipped += 1;
                continue;
            };
            let fire = self.level.draw(rng);
            let name = &names[rng.gen_range(0..names.len())];
            if !fire {
                continue;
            }
            let last_ws = doc.tokens[span.end - 1].ws;
            let new_tokens: Vec<NewToken> = name
                .iter()
                .enumerate()
                .map(|(j, form)| {
                    let ws = if j + 1 == name.len() { last_ws } else { true };
                    NewToken::new(form.clone(), ws).with_upos("PROPN")
                })
                .collect();
            tokens_modified += new_tokens.len();
            replacements
                .push(Replacement::new(span.range(), new_tokens).with_policy(SpanPolicy::Transfer));
        }
        let doc = if replacements.is_empty() {
            doc.clone()
        } else {
            apply_edits(doc, &EditPlan::new(replacements))?.doc
        };
        Ok(Outcome {
            doc,
            tokens_modified,
            spans_dropped: 0,
            spans_skipped: skipped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::{Annotations, Span};
    use crate::validate::validate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    fn level(p: f64) -> Level {
        Level::new(p).unwrap()
    }

    fn tagged(forms: &[&str], upos: &[&str]) -> Document {
        let mut ws = vec![true; forms.len()];
        *ws.last_mut().unwrap() = false;
        Document::from_tokens(
            forms,
            &ws,
            Annotations {
                upos: Some(upos.iter().map(|s| s.to_string()).collect()),
                ..Default::default()
            },
            vec![0..forms.len()],
            vec![],
        )
        .unwrap()
    }

    fn jane() -> Document {
        Document::from_tokens(
            &["Jane", "Doe", "sleeps", "."],
            &[true, true, true, false],
            Annotations {
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
                ..Default::default()
            },
            vec![0..4],
            vec![Span::new(0, 2, "PER")],
        )
        .unwrap()
    }

    #[test]
    fn casing_patterns() {
        assert_eq!(case_pattern("HAPPY"), CasePattern::Upper);
        assert_eq!(case_pattern("Happy"), CasePattern::Title);
        assert_eq!(case_pattern("happy"), CasePattern::Lower);
        assert_eq!(case_pattern("hAPPY"), CasePattern::Lower);
        assert_eq!(case_pattern("McDonald"), CasePattern::Lower);
        assert_eq!(case_pattern("A"), CasePattern::Title);
        assert_eq!(case_pattern("U.S."), CasePattern::Upper);
        assert_eq!(apply_case(CasePattern::Title, "glad"), "Glad");
        assert_eq!(apply_case(CasePattern::Upper, "glad"), "GLAD");
        assert_eq!(apply_case(CasePattern::Lower, "GLAD"), "glad");
    }

    fn wordlist(entries: &[(&str, &[&str])]) -> WordList {
        WordList::new(
            entries
                .iter()
                .map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn wordlist_replace_examples() {
        let d = tagged(&["I", "am", "happy"], &["PRON", "AUX", "ADJ"]);
        let empty = WordReplace::new("w", level(1.0), WordList::default());
        assert_eq!(empty.augment(&d, &mut rng()).unwrap().doc, d);

        let aug = WordReplace::new("w", level(1.0), wordlist(&[("happy", &["glad"])]));
        let out = aug.augment(&d, &mut rng()).unwrap();
        assert_eq!(out.doc.text, "I am glad");
        assert_eq!(out.doc.tokens[2].lemma, "glad");
        assert_eq!(out.doc.tokens[2].upos, "ADJ");
        assert_eq!(out.tokens_modified, 1);

        let d = tagged(&["Happy", "days"], &["ADJ", "NOUN"]);
        let out = aug.augment(&d, &mut rng()).unwrap();
        assert_eq!(out.doc.text, "Glad days");
        let d = tagged(&["HAPPY", "days"], &["ADJ", "NOUN"]);
        assert_eq!(aug.augment(&d, &mut rng()).unwrap().doc.text, "GLAD days");
    }

    #[test]
    fn synonym_replace_examples() {
        let lex = Arc::new(
            SynonymLexicon::from_tsv("happy\tADJ\tglad,joyful\nrun\tVERB\tsprint\n").unwrap(),
        );
        let aug = WordReplace::new("synonym_replace", level(1.0), LexiconSource::new(lex));

        let d = tagged(&["a", "happy", "dog"], &["DET", "ADJ", "NOUN"]);
        for seed in 0..20 {
            let out = aug
                .augment(&d, &mut ChaCha8Rng::seed_from_u64(seed))
                .unwrap();
            assert!(["glad", "joyful"].contains(&out.doc.tokens[1].form.as_str()));
            assert_eq!(out.doc.tokens[0].form, "a");
            assert_eq!(out.doc.tokens[2].form, "dog");
        }

        let wrong_pos = tagged(&["happy"], &["NOUN"]);
        assert_eq!(aug.augment(&wrong_pos, &mut rng()).unwrap().doc, wrong_pos);

        let absent = tagged(&["sad"], &["ADJ"]);
        assert_eq!(aug.augment(&absent, &mut rng()).unwrap().doc, absent);

        // lemma fallback: "ran" is not a key but its lemma is
        let mut d = tagged(&["ran"], &["VERB"]);
        d.tokens[0].lemma = "run".into();
        assert_eq!(aug.augment(&d, &mut rng()).unwrap().doc.text, "sprint");
    }

    #[test]
    fn embedding_replace_examples() {
        let table = Arc::new(Embeddings::from_text("a 1 0\nb 0 1\nc 1 0.1\n").unwrap());
        let aug = WordReplace::new(
            "embedding_replace",
            level(1.0),
            EmbeddingSource::new(table.clone(), 1).unwrap(),
        );
        let d = tagged(&["a", "zzz"], &["X", "X"]);
        let out = aug.augment(&d, &mut rng()).unwrap();
        assert_eq!(out.doc.text, "c zzz");

        let all = WordReplace::new(
            "embedding_replace",
            level(1.0),
            EmbeddingSource::new(table.clone(), 5).unwrap(),
        );
        for seed in 0..20 {
            let out = all
                .augment(&d, &mut ChaCha8Rng::seed_from_u64(seed))
                .unwrap();
            assert!(["b", "c"].contains(&out.doc.tokens[0].form.as_str()));
            assert_eq!(out.doc.tokens[1].form, "zzz");
        }
        assert!(EmbeddingSource::new(table, 0).is_err());
    }

    #[test]
    fn word_replace_inside_multi_token_span_drops_it() {
        let aug = WordReplace::new("w", level(1.0), wordlist(&[("doe", &["Roe"])]));
        let out = aug.augment(&jane(), &mut rng()).unwrap();
        assert_eq!(out.doc.text, "Jane Roe sleeps .");
        assert!(out.doc.ents.is_empty());
        assert_eq!(out.spans_dropped, 1);
        assert!(validate(&out.doc).is_empty());
    }

    #[test]
    fn entity_replace_jane_doe() {
        let names = Arc::new(NameLists::from_json(r#"{"PER":[["John"]]}"#).unwrap());
        let aug = EntityReplace::new(level(1.0), names.clone());
        let out = aug.augment(&jane(), &mut rng()).unwrap();
        let doc = out.doc;
        assert_eq!(doc.text, "John sleeps .");
        assert_eq!(doc.ents, vec![Span::new(0, 1, "PER")]);
        assert_eq!(doc.tokens[0].head, Some(1));
        assert_eq!(doc.tokens[0].deprel, "nsubj");
        assert_eq!(doc.tokens[0].upos, "PROPN");
        assert!(validate(&doc).is_empty());

        let plain = tagged(&["no", "entities"], &["X", "X"]);
        assert_eq!(aug.augment(&plain, &mut rng()).unwrap().doc, plain);
    }

    #[test]
    fn entity_replace_skips_unknown_labels() {
        let names = Arc::new(NameLists::from_json(r#"{"PER":[["John"]]}"#).unwrap());
        let mut d = jane();
        d.ents[0].label = "ORG".into();
        let out = EntityReplace::new(level(1.0), names)
            .augment(&d, &mut rng())
            .unwrap();
        assert_eq!(out.doc, d);
        assert_eq!(out.spans_skipped, 1);
    }

    #[test]
    fn entity_replace_multi_token_names() {
        let names = Arc::new(NameLists::from_json(r#"{"PER":[["Mary","Ann","Lee"]]}"#).unwrap());
        let out = EntityReplace::new(level(1.0), names)
            .augment(&jane(), &mut rng())
            .unwrap();
        assert_eq!(out.doc.text, "Mary Ann Lee sleeps .");
        assert_eq!(out.doc.ents, vec![Span::new(0, 3, "PER")]);
        assert!(out.doc.tokens[..3].iter().all(|t| t.upos == "PROPN"));
        assert!(validate(&out.doc).is_empty());
    }

    #[test]
    fn entity_replace_copies_final_whitespace() {
        let d = Document::from_tokens(
            &["see", "Jane"],
            &[true, false],
            Annotations::default(),
            vec![0..2],
            vec![Span::new(1, 2, "PER")],
        )
        .unwrap();
        let names = Arc::new(NameLists::from_json(r#"{"PER":[["Li","Wei"]]}"#).unwrap());
        let out = EntityReplace::new(level(1.0), names)
            .augment(&d, &mut rng())
            .unwrap();
        assert_eq!(out.doc.text, "see Li Wei");
        assert!(!out.doc.tokens[2].ws);
        assert!(validate(&out.doc).is_empty());
    }
}
