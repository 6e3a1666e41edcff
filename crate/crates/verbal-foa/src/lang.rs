//! Rule-based instruction parser.
//!
//! Replaces a full dependency parser with a positional grammar that covers
//! single-clause imperatives: the first lexicon verb opens the clause, the
//! first object-lexicon noun after it is the target, and the first color
//! token between them is the attribute. The pronouns "it" and "them" after
//! a later verb refer back to the already-found target.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::ColorName;

/// A task verb with its surface forms ("pick up" and "pick" both map to
/// the canonical form "pick").
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerbEntry {
    pub canonical: String,
    /// Surface variants, possibly multiword. Defaults to the canonical
    /// form itself when omitted.
    #[serde(default)]
    pub variants: Vec<String>,
}

/// Verb and noun vocabularies used by the parser. The color vocabulary is
/// fixed in code and not configurable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lexicons {
    pub task_verbs: Vec<VerbEntry>,
    pub object_nouns: Vec<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum LexiconError {
    #[error("lexicon config is malformed: {0}")]
    Schema(String),
    #[error("duplicate canonical verb {0:?}")]
    DuplicateCanonical(String),
    #[error("surface variant {variant:?} maps to both {first:?} and {second:?}")]
    AmbiguousVariant {
        variant: String,
        first: String,
        second: String,
    },
    #[error("object noun {0:?} must be a single non-empty token")]
    BadNoun(String),
    #[error("verb entry {0:?} has an empty surface form")]
    EmptyVariant(String),
}

impl Lexicons {
    /// Parses a lexicon config document (JSON) and validates it.
    pub fn from_json(document: &[u8]) -> Result<Lexicons, LexiconError> {
        let lex: Lexicons = serde_json::from_slice(document)
            .map_err(|e| LexiconError::Schema(e.to_string()))?;
        lex.validate()?;
        Ok(lex)
    }

    pub fn validate(&self) -> Result<(), LexiconError> {
        let mut seen_canonical: Vec<&str> = Vec::new();
        let mut seen_variants: Vec<(Vec<String>, &str)> = Vec::new();
        for entry in &self.task_verbs {
            if seen_canonical.contains(&entry.canonical.as_str()) {
                return Err(LexiconError::DuplicateCanonical(entry.canonical.clone()));
            }
            seen_canonical.push(&entry.canonical);
            for variant in entry.surface_forms() {
                let tokens = tokenize(&variant);
                if tokens.is_empty() {
                    return Err(LexiconError::EmptyVariant(entry.canonical.clone()));
                }
                if let Some((_, owner)) = seen_variants.iter().find(|(v, _)| *v == tokens) {
                    if *owner != entry.canonical {
                        return Err(LexiconError::AmbiguousVariant {
                            variant: variant.clone(),
                            first: owner.to_string(),
                            second: entry.canonical.clone(),
                        });
                    }
                } else {
                    seen_variants.push((tokens, &entry.canonical));
                }
            }
        }
        for noun in &self.object_nouns {
            if tokenize(noun).len() != 1 {
                return Err(LexiconError::BadNoun(noun.clone()));
            }
        }
        Ok(())
    }

    fn is_object_noun(&self, token: &str) -> bool {
        self.object_nouns.iter().any(|n| n == token)
    }
}

impl VerbEntry {
    fn surface_forms(&self) -> Vec<String> {
        if self.variants.is_empty() {
            vec![self.canonical.clone()]
        } else {
            self.variants.clone()
        }
    }
}

impl Default for Lexicons {
    /// Household vocabulary: the verbs the default task knowledge base
    /// understands plus common detector class names.
    fn default() -> Self {
        let verb = |canonical: &str, variants: &[&str]| VerbEntry {
            canonical: canonical.to_string(),
            variants: variants.iter().map(|s| s.to_string()).collect(),
        };
        Lexicons {
            task_verbs: vec![
                verb("pick", &["pick", "pick up"]),
                verb("place", &["place"]),
                verb("put", &["put", "put down"]),
                verb("lift", &["lift"]),
                verb("open", &["open"]),
                verb("close", &["close", "shut"]),
            ],
            object_nouns: [
                "cup", "dish", "plate", "bottle", "bowl", "pitcher", "can", "box", "apple",
                "banana", "cleanser", "fridge", "shelf", "table", "door", "drawer", "book",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        }
    }
}

/// Parsed verbal filters: task-candidate verbs, the target-object name,
/// and an optional color attribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstructionFoa {
    /// Canonical verbs, each listed once, ordered by first occurrence.
    pub verbs: Vec<String>,
    pub target_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<ColorName>,
    /// Other object nouns attached to later verbs. Diagnostics only; the
    /// pipeline tracks a single target per instruction.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub secondary_objects: Vec<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("no task verb found in transcript")]
    NoTaskVerb,
    #[error("no target object found after a task verb")]
    NoTargetObject,
}

/// Lowercases, strips punctuation, and splits on whitespace.
pub fn tokenize(transcript: &str) -> Vec<String> {
    transcript
        .to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(|s| s.to_string())
        .collect()
}

struct VerbMatch {
    canonical: String,
    /// Token index just past the matched surface form.
    end: usize,
}

/// Matches lexicon verbs left to right. At each position the longest
/// matching surface form wins, so multiword variants beat single tokens.
fn match_verbs(tokens: &[String], lex: &Lexicons) -> Vec<VerbMatch> {
    let mut matches = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut best: Option<(usize, &str)> = None; // (length, canonical)
        for entry in &lex.task_verbs {
            for variant in entry.surface_forms() {
                let vt = tokenize(&variant);
                if vt.is_empty() || i + vt.len() > tokens.len() {
                    continue;
                }
                if tokens[i..i + vt.len()] == vt[..]
                    && best.map_or(true, |(len, _)| vt.len() > len)
                {
                    best = Some((vt.len(), &entry.canonical));
                }
            }
        }
        if let Some((len, canonical)) = best {
            matches.push(VerbMatch {
                canonical: canonical.to_string(),
                end: i + len,
            });
            i += len;
        } else {
            i += 1;
        }
    }
    matches
}

/// Extracts the task-candidate, target-name, and attribute filters from a
/// transcript.
pub fn parse_instruction(transcript: &str, lex: &Lexicons) -> Result<InstructionFoa, ParseError> {
    let tokens = tokenize(transcript);
    let matches = match_verbs(&tokens, lex);
    if matches.is_empty() {
        return Err(ParseError::NoTaskVerb);
    }

    let mut verbs: Vec<String> = Vec::new();
    for m in &matches {
        if !verbs.contains(&m.canonical) {
            verbs.push(m.canonical.clone());
        }
    }

    // Target: first object noun after the first verb.
    let first_end = matches[0].end;
    let target_pos = (first_end..tokens.len())
        .find(|&i| lex.is_object_noun(&tokens[i]))
        .ok_or(ParseError::NoTargetObject)?;
    let target_name = tokens[target_pos].clone();

    // Attribute: first color token strictly between the verb and target.
    let attribute = tokens[first_end..target_pos]
        .iter()
        .find_map(|t| ColorName::from_token(t));

    // Later verbs: a pronoun refers back to the target; a different noun is
    // recorded as a diagnostic.
    let mut secondary_objects = Vec::new();
    for m in &matches[1..] {
        for token in &tokens[m.end..] {
            if token == "it" || token == "them" {
                break; // resolves to the target
            }
            if lex.is_object_noun(token) {
                if *token != target_name && !secondary_objects.contains(token) {
                    secondary_objects.push(token.clone());
                }
                break;
            }
        }
    }

    Ok(InstructionFoa {
        verbs,
        target_name,
        attribute,
        secondary_objects,
    })
}
