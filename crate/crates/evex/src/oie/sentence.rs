//! Sentence splitting with an abbreviation guard.

use std::collections::HashSet;

/// Abbreviations (tokens ending in a period) that never close a sentence.
#[derive(Clone, Debug, Default)]
pub struct AbbreviationList {
    entries: HashSet<String>,
}

impl AbbreviationList {
    pub fn new<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        AbbreviationList {
            entries: entries
                .into_iter()
                .map(|s| s.into().to_lowercase())
                .collect(),
        }
    }

    /// Parses one abbreviation per line, `#` comments allowed.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn contains(&self, word_with_period: &str) -> bool {
        self.entries.contains(word_with_period.to_lowercase().as_str())
    }
}

/// One sentence with byte offsets into the original text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sentence<'a> {
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
}

/// Splits on `.`, `!`, `?` followed by whitespace and a capital letter,
/// unless the terminator closes a listed abbreviation. Empty input yields
/// no sentences; text without a terminator is one sentence.
pub fn split_sentences<'a>(text: &'a str, abbreviations: &AbbreviationList) -> Vec<Sentence<'a>> {
    let mut sentences = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut start = 0usize;

    let push = |start: usize, end: usize, out: &mut Vec<Sentence<'a>>| {
        let slice = &text[start..end];
        let trimmed = slice.trim();
        if trimmed.is_empty() {
            return;
        }
        let lead = slice.len() - slice.trim_start().len();
        let trail = slice.len() - slice.trim_end().len();
        out.push(Sentence {
            text: trimmed,
            start: start + lead,
            end: end - trail,
        });
    };

    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if matches!(c, '.' | '!' | '?') {
            // Consume a run of terminators ("?!", "...").
            let mut j = i;
            while j + 1 < chars.len() && matches!(chars[j + 1].1, '.' | '!' | '?') {
                j += 1;
            }
            let boundary_end = chars
                .get(j + 1)
                .map(|(p, _)| *p)
                .unwrap_or(text.len());

            let guarded = c == '.' && i == j && {
                let word_start = text[..pos]
                    .char_indices()
                    .rev()
                    .find(|(_, ch)| ch.is_whitespace())
                    .map(|(p, ch)| p + ch.len_utf8())
                    .unwrap_or(0);
                abbreviations.contains(&text[word_start..boundary_end])
            };

            if !guarded {
                // Require whitespace then a capital to split; end of text
                // always closes the sentence.
                let mut k = j + 1;
                let mut saw_space = false;
                while k < chars.len() && chars[k].1.is_whitespace() {
                    saw_space = true;
                    k += 1;
                }
                if k >= chars.len() {
                    push(start, boundary_end, &mut sentences);
                    start = text.len();
                } else if saw_space && chars[k].1.is_uppercase() {
                    push(start, boundary_end, &mut sentences);
                    start = chars[k].0;
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    push(start, text.len(), &mut sentences);
    sentences
}
