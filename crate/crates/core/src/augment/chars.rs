//! Character-level augmenters. These rewrite forms or whitespace flags only;
//! token count, sentence ranges, heads, relations and entity spans stay put.

use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{Augmenter, Level, Outcome};
use crate::doc::{Document, Token};
use crate::error::{Error, Result};
use crate::resources::KeyboardLayout;

fn single(mut it: impl Iterator<Item = char>) -> Option<char> {
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Rebuilds `doc` with new token layer contents, reusing sentence and span structure.
fn rebuild(doc: &Document, tokens: Vec<Token>, tokens_modified: usize) -> Outcome {
    if tokens_modified == 0 {
        return Outcome::unchanged(doc);
    }
    Outcome {
        doc: Document::assemble(tokens, doc.sents.clone(), doc.ents.clone()),
        tokens_modified,
        spans_dropped: 0,
        spans_skipped: 0,
    }
}

/// Replaces characters by neighbouring keys.
#[derive(Debug, Clone)]
pub struct KeystrokeError {
    level: Level,
    layout: Arc<KeyboardLayout>,
}

impl KeystrokeError {
    pub fn new(level: Level, layout: Arc<KeyboardLayout>) -> Self {
        KeystrokeError { level, layout }
    }
}

impl Augmenter for KeystrokeError {
    fn name(&self) -> &str {
        "keystroke_error"
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let mut tokens = doc.tokens.clone();
        let mut modified = 0;
        for token in &mut tokens {
            let mut changed = false;
            let form: String = token
                .form
                .chars()
                .map(|c| {
                    let neighbors = self.layout.neighbors(c);
                    if !c.is_alphabetic() || neighbors.is_empty() {
                        return c;
                    }
                    let fire = self.level.draw(rng);
                    let pick = neighbors[rng.gen_range(0..neighbors.len())];
                    if !fire {
                        return c;
                    }
                    changed = true;
                    if c.is_uppercase() {
                        single(pick.to_uppercase()).unwrap_or(pick)
                    } else {
                        pick
                    }
                })
                .collect();
            if changed && form != token.form {
                token.form = form;
                modified += 1;
            }
        }
        Ok(rebuild(doc, tokens, modified))
    }
}

/// Transposes one adjacent character pair inside a token.
#[derive(Debug, Clone)]
pub struct CharSwap {
    level: Level,
}

impl CharSwap {
    pub fn new(level: Level) -> Self {
        CharSwap { level }
    }
}

impl Augmenter for CharSwap {
    fn name(&self) -> &str {
        "char_swap"
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let mut tokens = doc.tokens.clone();
        let mut modified = 0;
        for token in &mut tokens {
            let mut chars: Vec<char> = token.form.chars().collect();
            if chars.len() < 2 {
                continue;
            }
            let fire = self.level.draw(rng);
            let pos = rng.gen_range(0..chars.len() - 1);
            if fire && chars[pos] != chars[pos + 1] {
                chars.swap(pos, pos + 1);
                token.form = chars.into_iter().collect();
                modified += 1;
            }
        }
        Ok(rebuild(doc, tokens, modified))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseMode {
    Upper,
    Lower,
    Random,
}

impl CaseMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseMode::Upper => "upper",
            CaseMode::Lower => "lower",
            CaseMode::Random => "random",
        }
    }
}

impl FromStr for CaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(CaseMode::Upper),
            "lower" => Ok(CaseMode::Lower),
            "random" => Ok(CaseMode::Random),
            other => Err(Error::InvalidParam(format!(
                "casing mode must be upper, lower or random, not {:?}",
                other
            ))),
        }
    }
}

/// Upper-, lower- or randomly re-cases individual characters.
#[derive(Debug, Clone)]
pub struct Casing {
    level: Level,
    mode: CaseMode,
}

impl Casing {
    pub fn new(level: Level, mode: CaseMode) -> Self {
        Casing { level, mode }
    }
}

impl Augmenter for Casing {
    fn name(&self) -> &str {
        "casing"
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let mut tokens = doc.tokens.clone();
        let mut modified = 0;
        for token in &mut tokens {
            let form: String = token
                .form
                .chars()
                .map(|c| {
                    if !(c.is_uppercase() || c.is_lowercase()) {
                        return c;
                    }
                    let fire = self.level.draw(rng);
                    let upper = match self.mode {
                        CaseMode::Upper => true,
                        CaseMode::Lower => false,
                        CaseMode::Random => rng.gen::<bool>(),
                    };
                    if !fire {
                        return c;
                    }
                    let converted = if upper {
                        single(c.to_uppercase())
                    } else {
                        single(c.to_lowercase())
                    };
                    converted.unwrap_or(c)
                })
                .collect();
            if form != token.form {
                token.form = form;
                modified += 1;
            }
        }
        Ok(rebuild(doc, tokens, modified))
    }
}

/// Drops the space after tokens.
#[derive(Debug, Clone)]
pub struct SpacingRemoval {
    level: Level,
}

impl SpacingRemoval {
    pub fn new(level: Level) -> Self {
        SpacingRemoval { level }
    }
}

impl Augmenter for SpacingRemoval {
    fn name(&self) -> &str {
        "spacing_removal"
    }

    fn augment(&self, doc: &Document, rng: &mut dyn RngCore) -> Result<Outcome> {
        let mut tokens = doc.tokens.clone();
        let mut modified = 0;
        for token in tokens.iter_mut().filter(|t| t.ws) {
            if self.level.draw(rng) {
                token.ws = false;
                modified += 1;
            }
        }
        Ok(rebuild(doc, tokens, modified))
    }
}
