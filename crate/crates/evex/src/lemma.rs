//! Verb-phrase lemmatization.
//!
//! Reduces a conjugated relation phrase to its infinitive head so it can be
//! matched against the ontology relation vocabulary: auxiliaries are dropped,
//! known adverb/adjective modifiers are removed, the head verb is rewritten
//! through an irregular-form table and then ordered suffix rules, and
//! trailing prepositions are kept verbatim. Output is always lowercase.
//!
//! Unknown verbs fall through the suffix rules; a wrong lemma simply fails
//! the relation-vocabulary gate downstream.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LemmaError {
    #[error("relation phrase is empty after normalization")]
    EmptyAfterNormalization,
    #[error("irregular verb table line {line}: {message}")]
    ParseIrregulars { line: usize, message: String },
}

/// A violation found by [`LemmaRules::fixpoint_check`]: an irregular-table
/// target that does not lemmatize to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointViolation {
    pub inflected: String,
    pub lemma: String,
    pub relemmatized: String,
}

/// Auxiliary set, irregular-form table, and word classes backing the
/// suffix rules.
#[derive(Clone, Debug)]
pub struct LemmaRules {
    auxiliaries: HashSet<String>,
    be_forms: HashSet<String>,
    irregulars: HashMap<String, String>,
    verb_stems: HashSet<String>,
    adpositions: HashSet<String>,
    modifiers: HashSet<String>,
}

const AUXILIARIES: &[&str] = &[
    "has", "have", "had", "is", "are", "was", "were", "be", "been", "being", "will", "would",
    "do", "does", "did", "am", "can", "could", "shall", "should", "may", "might", "must", "'d",
    "'ll", "'ve", "'re", "'m", "'s",
];

const BE_FORMS: &[&str] = &["be", "is", "are", "was", "were", "am", "been", "being"];

impl LemmaRules {
    /// Builds the rule table. `verb_stems` drive suffix restoration
    /// (`scheduled` -> `schedule`), `adpositions` are preserved when
    /// trailing, and `modifiers` (known adverbs/adjectives) are dropped.
    pub fn new<I, V, A, M>(irregulars: I, verb_stems: V, adpositions: A, modifiers: M) -> Self
    where
        I: IntoIterator<Item = (String, String)>,
        V: IntoIterator<Item = String>,
        A: IntoIterator<Item = String>,
        M: IntoIterator<Item = String>,
    {
        LemmaRules {
            auxiliaries: AUXILIARIES.iter().map(|s| s.to_string()).collect(),
            be_forms: BE_FORMS.iter().map(|s| s.to_string()).collect(),
            irregulars: irregulars
                .into_iter()
                .map(|(k, v)| (k.to_lowercase(), v.to_lowercase()))
                .collect(),
            verb_stems: verb_stems.into_iter().map(|s| s.to_lowercase()).collect(),
            adpositions: adpositions.into_iter().map(|s| s.to_lowercase()).collect(),
            modifiers: modifiers.into_iter().map(|s| s.to_lowercase()).collect(),
        }
    }

    /// Parses an `inflected TAB lemma` table, `#` comments allowed.
    pub fn parse_irregulars(text: &str) -> Result<Vec<(String, String)>, LemmaError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            match (parts.next(), parts.next(), parts.next()) {
                (Some(inflected), Some(lemma), None) => {
                    entries.push((inflected.trim().to_string(), lemma.trim().to_string()));
                }
                _ => {
                    return Err(LemmaError::ParseIrregulars {
                        line: idx + 1,
                        message: "expected exactly one TAB separator".to_string(),
                    })
                }
            }
        }
        Ok(entries)
    }

    /// Merges override entries into the irregular table.
    pub fn add_irregulars<I>(&mut self, entries: I)
    where
        I: IntoIterator<Item = (String, String)>,
    {
        for (k, v) in entries {
            self.irregulars.insert(k.to_lowercase(), v.to_lowercase());
        }
    }

    pub fn is_auxiliary(&self, word: &str) -> bool {
        self.auxiliaries.contains(word.to_lowercase().as_str())
    }

    pub fn is_adposition(&self, word: &str) -> bool {
        self.adpositions.contains(word.to_lowercase().as_str())
    }

    /// Lemmatizes a single verb form: irregulars first, then suffix rules.
    pub fn lemmatize_verb(&self, word: &str) -> String {
        let word = word.to_lowercase();
        if self.be_forms.contains(&word) {
            return "be".to_string();
        }
        if let Some(lemma) = self.irregulars.get(&word) {
            return lemma.clone();
        }
        if self.verb_stems.contains(&word) {
            return word;
        }
        for candidate in stem_candidates(&word) {
            if self.verb_stems.contains(&candidate) {
                return candidate;
            }
        }
        fallback_stem(&word)
    }

    /// Normalizes a whole relation phrase: drops auxiliaries and known
    /// modifiers, lemmatizes the head verb, keeps the rest verbatim, and
    /// preserves trailing prepositions.
    pub fn lemmatize_verb_phrase(&self, phrase: &str) -> Result<String, LemmaError> {
        let tokens: Vec<String> = phrase
            .split_whitespace()
            .map(str::to_lowercase)
            .filter(|t| t.chars().any(char::is_alphanumeric))
            .collect();
        if tokens.is_empty() {
            return Err(LemmaError::EmptyAfterNormalization);
        }

        let mut end = tokens.len();
        while end > 0 && self.adpositions.contains(&tokens[end - 1]) {
            end -= 1;
        }
        let trailing = &tokens[end..];

        let core: Vec<&String> = tokens[..end]
            .iter()
            .filter(|t| !self.auxiliaries.contains(*t) && !self.modifiers.contains(*t))
            .collect();

        let mut parts: Vec<String> = if core.is_empty() {
            if tokens[..end].iter().any(|t| self.be_forms.contains(t)) {
                vec!["be".to_string()]
            } else {
                return Err(LemmaError::EmptyAfterNormalization);
            }
        } else {
            let mut parts = vec![self.lemmatize_verb(core[0])];
            parts.extend(core[1..].iter().map(|t| t.to_string()));
            parts
        };
        parts.extend(trailing.iter().cloned());
        Ok(parts.join(" "))
    }

    /// Verifies that every irregular-table target lemmatizes to itself.
    pub fn fixpoint_check(&self) -> Vec<FixpointViolation> {
        let mut violations: Vec<FixpointViolation> = Vec::new();
        for (inflected, lemma) in &self.irregulars {
            let relemmatized = self.lemmatize_verb(lemma);
            if &relemmatized != lemma {
                violations.push(FixpointViolation {
                    inflected: inflected.clone(),
                    lemma: lemma.clone(),
                    relemmatized,
                });
            }
        }
        violations.sort_by(|a, b| a.inflected.cmp(&b.inflected));
        violations
    }
}

/// Stem candidates for an inflected form, most specific first. Shared by
/// the tagger's known-verb-stem check.
pub fn stem_candidates(word: &str) -> Vec<String> {
    let w = word.to_lowercase();
    let mut out: Vec<String> = Vec::new();
    let mut push = |s: String| {
        if s.len() >= 2 && !out.contains(&s) {
            out.push(s);
        }
    };
    let n = w.len();
    if w.ends_with("ies") && n > 4 {
        push(format!("{}y", &w[..n - 3]));
    }
    if w.ends_with("es") && n > 3 {
        push(w[..n - 2].to_string());
        push(w[..n - 1].to_string());
    } else if w.ends_with('s') && !w.ends_with("ss") && n > 2 {
        push(w[..n - 1].to_string());
    }
    if w.ends_with("ied") && n > 4 {
        push(format!("{}y", &w[..n - 3]));
    }
    if w.ends_with("ed") && n > 3 {
        push(w[..n - 2].to_string());
        push(w[..n - 1].to_string());
        if let Some(undoubled) = undouble(&w[..n - 2]) {
            push(undoubled);
        }
    }
    if w.ends_with("ing") && n > 4 {
        push(w[..n - 3].to_string());
        push(format!("{}e", &w[..n - 3]));
        if let Some(undoubled) = undouble(&w[..n - 3]) {
            push(undoubled);
        }
    }
    out
}

fn undouble(stem: &str) -> Option<String> {
    let bytes = stem.as_bytes();
    let n = bytes.len();
    if n >= 3 && bytes[n - 1] == bytes[n - 2] {
        let c = bytes[n - 1] as char;
        if matches!(c, 'b' | 'd' | 'g' | 'm' | 'n' | 'p' | 'r' | 't') {
            return Some(stem[..n - 1].to_string());
        }
    }
    None
}

/// Suffix rewriting for verbs outside the stem lexicon.
fn fallback_stem(word: &str) -> String {
    let n = word.len();
    if word.ends_with("ies") && n > 4 {
        return format!("{}y", &word[..n - 3]);
    }
    if word.ends_with("ied") && n > 4 {
        return format!("{}y", &word[..n - 3]);
    }
    if word.ends_with("es") && n > 3 {
        let sibilant = ["ses", "xes", "zes", "ches", "shes", "oes"]
            .iter()
            .any(|suf| word.ends_with(suf));
        if sibilant {
            return word[..n - 2].to_string();
        }
        return word[..n - 1].to_string();
    }
    if word.ends_with('s') && !word.ends_with("ss") && n > 2 {
        return word[..n - 1].to_string();
    }
    if word.ends_with("ed") && n > 3 {
        let stripped = &word[..n - 2];
        if let Some(undoubled) = undouble(stripped) {
            return undoubled;
        }
        return stripped.to_string();
    }
    if word.ends_with("ing") && n > 4 {
        let stripped = &word[..n - 3];
        if let Some(undoubled) = undouble(stripped) {
            return undoubled;
        }
        return stripped.to_string();
    }
    word.to_string()
}
