//! Whitespace and punctuation tokenization.
//!
//! Alphanumeric runs form tokens; internal hyphens stay inside a token
//! ("non-executive"); an apostrophe starts a new token that keeps the
//! apostrophe ("I'd" -> `I`, `'d`); any other punctuation character is a
//! single-character token.

use super::Token;

pub fn tokenize(sentence: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = sentence.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphanumeric() {
            let mut j = i;
            loop {
                let next = j + 1;
                if next >= chars.len() {
                    break;
                }
                let nc = chars[next].1;
                if nc.is_alphanumeric() {
                    j = next;
                } else if nc == '-'
                    && next + 1 < chars.len()
                    && chars[next + 1].1.is_alphanumeric()
                {
                    j = next + 1;
                } else {
                    break;
                }
            }
            let end = chars
                .get(j + 1)
                .map(|(p, _)| *p)
                .unwrap_or(sentence.len());
            tokens.push(Token::new(&sentence[start..end], (start, end)));
            i = j + 1;
        } else if c == '\'' && i + 1 < chars.len() && chars[i + 1].1.is_alphanumeric() {
            // Contraction suffix: keep the apostrophe with what follows.
            let mut j = i + 1;
            while j + 1 < chars.len() && chars[j + 1].1.is_alphanumeric() {
                j += 1;
            }
            let end = chars
                .get(j + 1)
                .map(|(p, _)| *p)
                .unwrap_or(sentence.len());
            tokens.push(Token::new(&sentence[start..end], (start, end)));
            i = j + 1;
        } else {
            let end = chars
                .get(i + 1)
                .map(|(p, _)| *p)
                .unwrap_or(sentence.len());
            tokens.push(Token::new(&sentence[start..end], (start, end)));
            i += 1;
        }
    }
    tokens
}
