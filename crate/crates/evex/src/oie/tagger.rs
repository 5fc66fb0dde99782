//! Lexicon-first part-of-speech tagging with suffix heuristics.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{PosTag, Token};
use crate::lemma::stem_candidates;

#[derive(Debug, Error)]
pub enum TagLexiconError {
    #[error("lexicon line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Word -> tag lexicon. Lookup tries the exact form, then the lowercase
/// form. Entries tagged VERB double as the stem set for inflection
/// restoration.
#[derive(Clone, Debug, Default)]
pub struct TagLexicon {
    entries: HashMap<String, PosTag>,
    verb_stems: HashSet<String>,
}

impl TagLexicon {
    /// Parses `word TAB TAG` lines, `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, TagLexiconError> {
        let mut lexicon = TagLexicon::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (word, tag) = match (parts.next(), parts.next(), parts.next()) {
                (Some(w), Some(t), None) => (w.trim(), t.trim()),
                _ => {
                    return Err(TagLexiconError::Parse {
                        line: idx + 1,
                        message: "expected word TAB tag".to_string(),
                    })
                }
            };
            let tag = match tag {
                "NOUN" => PosTag::Noun,
                "PROPN" => PosTag::Propn,
                "VERB" => PosTag::Verb,
                "AUX" => PosTag::Aux,
                "ADP" => PosTag::Adp,
                "DET" => PosTag::Det,
                "ADJ" => PosTag::Adj,
                "ADV" => PosTag::Adv,
                "NUM" => PosTag::Num,
                "PUNCT" => PosTag::Punct,
                "OTHER" => PosTag::Other,
                other => {
                    return Err(TagLexiconError::Parse {
                        line: idx + 1,
                        message: format!("unknown tag {other:?}"),
                    })
                }
            };
            lexicon.insert(word, tag);
        }
        Ok(lexicon)
    }

    pub fn insert(&mut self, word: &str, tag: PosTag) {
        if tag == PosTag::Verb {
            self.verb_stems.insert(word.to_lowercase());
        }
        self.entries.insert(word.to_string(), tag);
    }

    pub fn lookup(&self, word: &str) -> Option<PosTag> {
        self.entries
            .get(word)
            .or_else(|| self.entries.get(word.to_lowercase().as_str()))
            .copied()
    }

    pub fn is_known(&self, word: &str) -> bool {
        self.lookup(word).is_some()
    }

    pub fn verb_stems(&self) -> &HashSet<String> {
        &self.verb_stems
    }

    /// Words the lexicon lists as ADP (prepositions and particles).
    pub fn adpositions(&self) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(|(_, t)| **t == PosTag::Adp)
            .map(|(w, _)| w.as_str())
    }

    /// Words the lexicon lists as ADV or ADJ.
    pub fn modifiers(&self) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(|(_, t)| matches!(t, PosTag::Adv | PosTag::Adj))
            .map(|(w, _)| w.as_str())
    }

    fn is_inflected_verb(&self, word: &str) -> bool {
        stem_candidates(word)
            .iter()
            .any(|c| self.verb_stems.contains(c))
    }
}

/// Tags tokens in place: lexicon lookup first, then suffix heuristics
/// (`-ly` -> ADV, inflections of known verb stems -> VERB, capitalized
/// non-initial -> PROPN), else NOUN. Token position 0 counts as
/// sentence-initial, so a capitalized unknown there stays NOUN.
pub fn pos_tag(mut tokens: Vec<Token>, lexicon: &TagLexicon) -> Vec<Token> {
    let tags: Vec<PosTag> = tokens
        .iter()
        .enumerate()
        .map(|(index, token)| tag_for(token, index, lexicon))
        .collect();
    for (token, tag) in tokens.iter_mut().zip(tags) {
        token.pos = Some(tag);
    }
    tokens
}

fn tag_for(token: &Token, index: usize, lexicon: &TagLexicon) -> PosTag {
    let text = token.text.as_str();
    if !text.chars().any(char::is_alphanumeric) {
        return PosTag::Punct;
    }
    if text.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        return PosTag::Num;
    }
    if let Some(tag) = lexicon.lookup(text) {
        return tag;
    }
    let lower = text.to_lowercase();
    if lower.ends_with("ly") && lower.len() > 3 {
        return PosTag::Adv;
    }
    if lexicon.is_inflected_verb(&lower) {
        return PosTag::Verb;
    }
    if token.is_capitalized() && index > 0 {
        return PosTag::Propn;
    }
    PosTag::Noun
}
