//! Open relation-triple extraction.
//!
//! Turns sentences into `(arg1; rel; arg2)` triples. The native extractor
//! matches verb-centered patterns over coarse part-of-speech tags; the
//! textual triple format also lets pre-extracted output from an external
//! tool enter the pipeline.

mod extractor;
mod sentence;
mod tagger;
mod tokenizer;
mod triple;

pub use extractor::{
    extract_triples, lexical_filter, noun_phrase_chunks, FilterParseError, RelationFrequencyTable,
};
pub use sentence::{split_sentences, AbbreviationList, Sentence};
pub use tagger::{pos_tag, TagLexicon};
pub use tokenizer::tokenize;
pub use triple::{
    format_triple, parse_ingestion, parse_triple, ContextKind, IngestedBlock, Phrase,
    TripleContext, TripleExtraction, TripleParseError,
};

use serde::{Deserialize, Serialize};

/// Coarse part-of-speech tag set. `Adp` covers prepositions and particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Propn,
    Verb,
    Aux,
    Adp,
    Det,
    Adj,
    Adv,
    Num,
    Punct,
    Other,
}

/// One token: surface text, optional tag, byte span in its source string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub pos: Option<PosTag>,
    pub span: (usize, usize),
}

impl Token {
    pub fn new(text: impl Into<String>, span: (usize, usize)) -> Self {
        Token {
            text: text.into(),
            pos: None,
            span,
        }
    }

    pub fn is(&self, tag: PosTag) -> bool {
        self.pos == Some(tag)
    }

    /// True when the first character is an uppercase letter.
    pub fn is_capitalized(&self) -> bool {
        self.text.chars().next().is_some_and(char::is_uppercase)
    }

    /// True when the token has at least two characters and every letter is
    /// uppercase (acronyms such as "QNB").
    pub fn is_all_caps(&self) -> bool {
        self.text.chars().count() >= 2
            && self.text.chars().all(|c| !c.is_alphabetic() || c.is_uppercase())
            && self.text.chars().any(char::is_alphabetic)
    }
}
