//! JSON pipeline configuration.
//!
//! ```text
//! node     := leaf | combine | repeat | per_doc
//! leaf     := {"aug": NAME, "level": P, ...params}
//! combine  := {"combine": [node, ...]}
//! repeat   := {"repeat": {"n": N, "inner": node}}
//! per_doc  := {"per_doc": {"p": P, "inner": node}}
//! ```
//!
//! Leaf parameters by augmenter:
//!
//! | aug                 | params                                   |
//! |---------------------|------------------------------------------|
//! | `keystroke_error`   | `"layout": id`                           |
//! | `char_swap`         |                                          |
//! | `casing`            | `"mode": "upper" \| "lower" \| "random"` |
//! | `spacing_removal`   |                                          |
//! | `wordlist_replace`  | `"words": {form: [replacement, ...]}`    |
//! | `synonym_replace`   | `"lexicon": id`                          |
//! | `embedding_replace` | `"embeddings": id, "k": N`               |
//! | `token_swap`        |                                          |
//! | `entity_replace`    | `"names": id`                            |
//! | `sentence_shuffle`  |                                          |
//!
//! Unknown keys are rejected. `P` is a number in `[0, 1]`, `N` an integer ≥ 1.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::PipelineNode;
use crate::augment::AugmenterSpec;
use crate::error::{Error, Result};

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Parses a pipeline configuration from JSON text.
pub fn parse_config(source: &str) -> Result<PipelineNode> {
    let value: Value = serde_json::from_str(source).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    node_from_value(&value)
}

fn object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| config_err(format!("{} must be an object", what)))
}

fn only_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(key) => Err(config_err(format!("unknown key {:?} in {}", key, what))),
        None => Ok(()),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| config_err(format!("{} is missing {:?}", what, key)))
}

fn probability(obj: &Map<String, Value>, key: &str, what: &str) -> Result<f64> {
    let p = field(obj, key, what)?
        .as_f64()
        .ok_or_else(|| config_err(format!("{:?} in {} must be a number", key, what)))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!(
            "{:?} in {} is {} but must lie in [0, 1]",
            key, what, p
        )));
    }
    Ok(p)
}

fn count(obj: &Map<String, Value>, key: &str, what: &str) -> Result<usize> {
    let v = field(obj, key, what)?;
    let n = v.as_u64().ok_or_else(|| {
        config_err(format!(
            "{:?} in {} must be a non-negative integer",
            key, what
        ))
    })?;
    if n == 0 {
        return Err(Error::InvalidParam(format!(
            "{:?} in {} must be at least 1",
            key, what
        )));
    }
    Ok(n as usize)
}

fn string(obj: &Map<String, Value>, key: &str, what: &str) -> Result<String> {
    field(obj, key, what)?
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| config_err(format!("{:?} in {} must be a string", key, what)))
}

fn node_from_value(value: &Value) -> Result<PipelineNode> {
    let obj = object(value, "pipeline node")?;
    if obj.contains_key("aug") {
        return leaf_from_object(obj).map(PipelineNode::Leaf);
    }
    if obj.len() != 1 {
        return Err(config_err(format!(
            "pipeline node must have exactly one of aug, combine, repeat, per_doc; found keys {:?}",
            obj.keys().collect::<Vec<_>>()
        )));
    }
    let (key, inner) = obj.iter().next().expect("one key");
    match key.as_str() {
        "combine" => {
            let children = inner
                .as_array()
                .ok_or_else(|| config_err("\"combine\" must be an array"))?;
            Ok(PipelineNode::Combine(
                children
                    .iter()
                    .map(node_from_value)
                    .collect::<Result<_>>()?,
            ))
        }
        "repeat" => {
            let o = object(inner, "repeat")?;
            only_keys(o, &["n", "inner"], "repeat")?;
            let n = count(o, "n", "repeat")?;
            Ok(PipelineNode::repeat(
                node_from_value(field(o, "inner", "repeat")?)?,
                n,
            ))
        }
        "per_doc" => {
            let o = object(inner, "per_doc")?;
            only_keys(o, &["p", "inner"], "per_doc")?;
            let p = probability(o, "p", "per_doc")?;
            Ok(PipelineNode::per_doc(
                node_from_value(field(o, "inner", "per_doc")?)?,
                p,
            ))
        }
        other => Err(config_err(format!("unknown pipeline node {:?}", other))),
    }
}

fn leaf_from_object(obj: &Map<String, Value>) -> Result<AugmenterSpec> {
    let name = string(obj, "aug", "augmenter")?;
    let what = name.as_str();
    let params: &[&str] = match what {
        "keystroke_error" => &["layout"],
        "casing" => &["mode"],
        "wordlist_replace" => &["words"],
        "synonym_replace" => &["lexicon"],
        "embedding_replace" => &["embeddings", "k"],
        "entity_replace" => &["names"],
        "char_swap" | "spacing_removal" | "token_swap" | "sentence_shuffle" => &[],
        other => return Err(config_err(format!("unknown augmenter {:?}", other))),
    };
    let mut allowed = vec!["aug", "level"];
    allowed.extend_from_slice(params);
    only_keys(obj, &allowed, what)?;
    let level = probability(obj, "level", what)?;

    Ok(match what {
        "keystroke_error" => AugmenterSpec::KeystrokeError {
            level,
            layout: string(obj, "layout", what)?,
        },
        "char_swap" => AugmenterSpec::CharSwap { level },
        "casing" => AugmenterSpec::Casing {
            level,
            mode: string(obj, "mode", what)?.parse()?,
        },
        "spacing_removal" => AugmenterSpec::SpacingRemoval { level },
        "wordlist_replace" => {
            let words = object(field(obj, "words", what)?, "\"words\"")?;
            let mut map = BTreeMap::new();
            for (form, list) in words {
                let list = list
                    .as_array()
                    .ok_or_else(|| {
                        config_err(format!("replacements for {:?} must be an array", form))
                    })?
                    .iter()
                    .map(|v| {
                        v.as_str().map(str::to_string).ok_or_else(|| {
                            config_err(format!("replacements for {:?} must be strings", form))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                map.insert(form.clone(), list);
            }
            AugmenterSpec::WordlistReplace { level, words: map }
        }
        "synonym_replace" => AugmenterSpec::SynonymReplace {
            level,
            lexicon: string(obj, "lexicon", what)?,
        },
        "embedding_replace" => AugmenterSpec::EmbeddingReplace {
            level,
            embeddings: string(obj, "embeddings", what)?,
            k: count(obj, "k", what)?,
        },
        "token_swap" => AugmenterSpec::TokenSwap { level },
        "entity_replace" => AugmenterSpec::EntityReplace {
            level,
            names: string(obj, "names", what)?,
        },
        "sentence_shuffle" => AugmenterSpec::SentenceShuffle { level },
        _ => unreachable!("checked above"),
    })
}

/// Serializes a pipeline tree back into its JSON configuration.
pub fn to_config(node: &PipelineNode) -> Value {
    match node {
        PipelineNode::Leaf(spec) => {
            let mut v = json!({"aug": spec.name(), "level": spec.level()});
            let extra = match spec {
                AugmenterSpec::KeystrokeError { layout, .. } => json!({"layout": layout}),
                AugmenterSpec::Casing { mode, .. } => json!({"mode": mode.as_str()}),
                AugmenterSpec::WordlistReplace { words, .. } => json!({"words": words}),
                AugmenterSpec::SynonymReplace { lexicon, .. } => json!({"lexicon": lexicon}),
                AugmenterSpec::EmbeddingReplace { embeddings, k, .. } => {
                    json!({"embeddings": embeddings, "k": k})
                }
                AugmenterSpec::EntityReplace { names, .. } => json!({"names": names}),
                _ => json!({}),
            };
            if let (Some(v), Some(extra)) = (v.as_object_mut(), extra.as_object()) {
                v.extend(extra.clone());
            }
            v
        }
        PipelineNode::Combine(children) => {
            json!({"combine": children.iter().map(to_config).collect::<Vec<_>>()})
        }
        PipelineNode::Repeat { child, n } => json!({"repeat": {"n": n, "inner": to_config(child)}}),
        PipelineNode::PerDoc { child, p } => {
            json!({"per_doc": {"p": p, "inner": to_config(child)}})
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let node = parse_config(
            r#"{"combine":[{"aug":"keystroke_error","level":0.05,"layout":"qwerty_en"},{"per_doc":{"p":0.5,"inner":{"aug":"entity_replace","level":1.0,"names":"names_en"}}}]}"#,
        )
        .unwrap();
        let expected = PipelineNode::combine(vec![
            PipelineNode::leaf(AugmenterSpec::KeystrokeError {
                level: 0.05,
                layout: "qwerty_en".into(),
            }),
            PipelineNode::per_doc(
                PipelineNode::leaf(AugmenterSpec::EntityReplace {
                    level: 1.0,
                    names: "names_en".into(),
                }),
                0.5,
            ),
        ]);
        assert_eq!(node, expected);
        assert_eq!(parse_config(&to_config(&node).to_string()).unwrap(), node);
    }

    #[test]
    fn every_augmenter_round_trips() {
        let source = r#"{"combine":[
            {"aug":"char_swap","level":0.1},
            {"aug":"casing","level":0.2,"mode":"random"},
            {"aug":"spacing_removal","level":0.3},
            {"aug":"wordlist_replace","level":0.4,"words":{"happy":["glad","merry"]}},
            {"aug":"synonym_replace","level":0.5,"lexicon":"basic_en"},
            {"aug":"embedding_replace","level":0.6,"embeddings":"vec","k":3},
            {"aug":"token_swap","level":0.7},
            {"aug":"sentence_shuffle","level":0.8},
            {"repeat":{"n":2,"inner":{"combine":[]}}}
        ]}"#;
        let node = parse_config(source).unwrap();
        match &node {
            PipelineNode::Combine(children) => assert_eq!(children.len(), 9),
            _ => panic!("expected combine"),
        }
        assert_eq!(parse_config(&to_config(&node).to_string()).unwrap(), node);
    }

    #[test]
    fn rejects_malformed_configs() {
        let code = |s: &str| parse_config(s).unwrap_err().code();
        assert_eq!(code("{"), "PARSE_ERROR");
        assert_eq!(code(r#"{"combin":[]}"#), "INVALID_CONFIG");
        assert_eq!(
            code(r#"{"aug":"char_swap","level":0.1,"layout":"x"}"#),
            "INVALID_CONFIG"
        );
        assert_eq!(code(r#"{"aug":"char_swap"}"#), "INVALID_CONFIG");
        assert_eq!(code(r#"{"aug":"nope","level":0.1}"#), "INVALID_CONFIG");
        assert_eq!(code(r#"{"aug":"char_swap","level":1.5}"#), "INVALID_PARAM");
        assert_eq!(
            code(r#"{"repeat":{"n":0,"inner":{"combine":[]}}}"#),
            "INVALID_PARAM"
        );
        assert_eq!(
            code(r#"{"per_doc":{"p":-1,"inner":{"combine":[]}}}"#),
            "INVALID_PARAM"
        );
        assert_eq!(
            code(r#"{"aug":"casing","level":1,"mode":"title"}"#),
            "INVALID_PARAM"
        );
        assert_eq!(
            code(r#"{"aug":"embedding_replace","level":1,"embeddings":"v","k":0}"#),
            "INVALID_PARAM"
        );
        assert_eq!(code(r#"[]"#), "INVALID_CONFIG");
        assert_eq!(code(r#"{"combine":[],"repeat":{}}"#), "INVALID_CONFIG");
    }
}
