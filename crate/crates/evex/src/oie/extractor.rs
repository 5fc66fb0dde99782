//! Verb-pattern relation extraction over tagged tokens.
//!
//! A relation phrase is a verb group (`AUX* VERB`) alone, followed by a
//! preposition or particle, or followed by intervening words and ending in
//! a preposition. For each verb only the longest match is kept. Arguments
//! are the noun-phrase chains nearest the relation on either side; a chain
//! is a run of immediately adjacent noun phrases, which keeps appositions
//! such as "Nadine the CEO" together.

use std::collections::HashMap;
use std::ops::Range;

use thiserror::Error;

use super::{Phrase, PosTag, Token, TripleExtraction};
use crate::lemma::LemmaRules;

/// Tags allowed between the verb and the final preposition.
fn is_intervening(tag: PosTag) -> bool {
    matches!(
        tag,
        PosTag::Noun | PosTag::Propn | PosTag::Adj | PosTag::Adv | PosTag::Det | PosTag::Num
    )
}

fn is_np_head(tag: PosTag) -> bool {
    matches!(tag, PosTag::Noun | PosTag::Propn | PosTag::Num)
}

/// Maximal `DET? ADJ* (NOUN|PROPN|NUM)+` runs, as token index ranges.
pub fn noun_phrase_chunks(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut chunks = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let start = i;
        let mut j = i;
        if tokens[j].is(PosTag::Det) {
            j += 1;
        }
        while j < tokens.len() && tokens[j].is(PosTag::Adj) {
            j += 1;
        }
        let head_start = j;
        while j < tokens.len() && tokens[j].pos.is_some_and(is_np_head) {
            j += 1;
        }
        if j > head_start {
            chunks.push(start..j);
            i = j;
        } else {
            i = start + 1;
        }
    }
    chunks
}

/// Merges immediately adjacent noun phrases into argument chains.
fn argument_chains(chunks: &[Range<usize>]) -> Vec<Range<usize>> {
    let mut chains: Vec<Range<usize>> = Vec::new();
    for chunk in chunks {
        match chains.last_mut() {
            Some(last) if last.end == chunk.start => last.end = chunk.end,
            _ => chains.push(chunk.clone()),
        }
    }
    chains
}

/// Extracts triples from one tagged sentence. Triples lacking either
/// argument are dropped; output is sorted by descending confidence.
pub fn extract_triples(sentence: &str, tokens: &[Token]) -> Vec<TripleExtraction> {
    let chains = argument_chains(&noun_phrase_chunks(tokens));
    let mut triples = Vec::new();

    for verb_idx in 0..tokens.len() {
        if !tokens[verb_idx].is(PosTag::Verb) {
            continue;
        }
        // Pull in the auxiliary run immediately before the verb.
        let mut rel_start = verb_idx;
        while rel_start > 0 && tokens[rel_start - 1].is(PosTag::Aux) {
            rel_start -= 1;
        }
        // Longest match: verb group, optional intervening words, final ADP.
        let mut scan = verb_idx + 1;
        while scan < tokens.len() && tokens[scan].pos.is_some_and(is_intervening) {
            scan += 1;
        }
        let rel_end = if scan < tokens.len() && tokens[scan].is(PosTag::Adp) {
            scan
        } else {
            verb_idx
        };

        let arg1 = chains
            .iter()
            .filter(|c| c.end <= rel_start)
            .max_by_key(|c| c.end);
        let arg2 = chains
            .iter()
            .filter(|c| c.start > rel_end)
            .min_by_key(|c| c.start);
        let (Some(arg1), Some(arg2)) = (arg1, arg2) else {
            continue;
        };

        let phrase = |range: &Range<usize>| {
            let span = (tokens[range.start].span.0, tokens[range.end - 1].span.1);
            Phrase::new(&sentence[span.0..span.1], span)
        };
        let propn_headed =
            |range: &Range<usize>| tokens[range.end - 1].is(PosTag::Propn);
        let simple = rel_end == verb_idx
            || (rel_end == verb_idx + 1 && tokens[rel_end].is(PosTag::Adp));

        let mut confidence: f64 = 0.5;
        if propn_headed(arg1) {
            confidence += 0.1;
        }
        if propn_headed(arg2) {
            confidence += 0.1;
        }
        if simple {
            confidence += 0.2;
        }
        if arg1.end == rel_start {
            confidence += 0.1;
        }
        confidence = confidence.clamp(0.0, 1.0);

        triples.push(TripleExtraction {
            arg1: phrase(arg1),
            rel: phrase(&(rel_start..rel_end + 1)),
            arg2: phrase(arg2),
            context: None,
            confidence,
            sentence: 0,
        });
    }

    triples.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));
    triples
}

#[derive(Debug, Error)]
pub enum FilterParseError {
    #[error("relation table line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Distinct-argument-pair counts for normalized relation phrases.
#[derive(Clone, Debug, Default)]
pub struct RelationFrequencyTable {
    counts: HashMap<String, u64>,
    pub threshold: u64,
}

impl RelationFrequencyTable {
    pub fn new<I>(counts: I, threshold: u64) -> Self
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        RelationFrequencyTable {
            counts: counts.into_iter().collect(),
            threshold,
        }
    }

    /// Parses `phrase TAB count` lines, `#` comments allowed.
    pub fn parse(text: &str, threshold: u64) -> Result<Self, FilterParseError> {
        let mut counts = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (phrase, count) = line.split_once('\t').ok_or_else(|| FilterParseError::Parse {
                line: idx + 1,
                message: "expected phrase TAB count".to_string(),
            })?;
            let count: u64 = count.trim().parse().map_err(|_| FilterParseError::Parse {
                line: idx + 1,
                message: format!("bad count {count:?}"),
            })?;
            counts.insert(phrase.trim().to_string(), count);
        }
        Ok(RelationFrequencyTable { counts, threshold })
    }

    pub fn count(&self, normalized: &str) -> u64 {
        self.counts.get(normalized).copied().unwrap_or(0)
    }
}

/// Keeps triples whose normalized relation clears the table threshold.
/// Without a table every triple is kept.
pub fn lexical_filter(
    triples: Vec<TripleExtraction>,
    table: Option<&RelationFrequencyTable>,
    lemma: &LemmaRules,
) -> Vec<TripleExtraction> {
    let Some(table) = table else {
        return triples;
    };
    triples
        .into_iter()
        .filter(|t| {
            let key = lemma
                .lemmatize_verb_phrase(&t.rel.text)
                .unwrap_or_else(|_| t.rel.text.to_lowercase());
            table.count(&key) >= table.threshold
        })
        .collect()
}
