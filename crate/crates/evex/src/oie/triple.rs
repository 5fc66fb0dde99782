//! The `(arg1; rel; arg2)` triple type and its textual wire form.
//!
//! The text form is `d: (arg1; rel; arg2)` with an optional leading
//! confidence and an optional trailing `[attrib=...]` or `[enabler=...]`
//! context. Files of pre-extracted triples use one triple per line;
//! consecutive lines form one sentence and a blank line starts the next.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TripleParseError {
    #[error("malformed triple: {0}")]
    Malformed(String),
    #[error("line {line}: malformed triple: {message}")]
    MalformedAt { line: usize, message: String },
}

/// A phrase with its byte span in the source (or reconstructed) sentence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phrase {
    pub text: String,
    pub span: (usize, usize),
}

impl Phrase {
    pub fn new(text: impl Into<String>, span: (usize, usize)) -> Self {
        Phrase {
            text: text.into(),
            span,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextKind {
    Attribution,
    Condition,
}

/// OLLIE-style clause modifier attached to a triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleContext {
    pub kind: ContextKind,
    pub text: String,
}

/// One relation triple with optional context and certainty degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleExtraction {
    pub arg1: Phrase,
    pub rel: Phrase,
    pub arg2: Phrase,
    pub context: Option<TripleContext>,
    pub confidence: f64,
    /// Ordinal of the sentence this triple came from, within its document.
    pub sentence: usize,
}

impl TripleExtraction {
    /// Builds a triple from bare texts, synthesizing spans over the
    /// reconstructed sentence `"arg1 rel arg2"`.
    pub fn from_texts(arg1: &str, rel: &str, arg2: &str) -> Self {
        let a1_end = arg1.len();
        let rel_start = a1_end + 1;
        let rel_end = rel_start + rel.len();
        let a2_start = rel_end + 1;
        TripleExtraction {
            arg1: Phrase::new(arg1, (0, a1_end)),
            rel: Phrase::new(rel, (rel_start, rel_end)),
            arg2: Phrase::new(arg2, (a2_start, a2_start + arg2.len())),
            context: None,
            confidence: 1.0,
            sentence: 0,
        }
    }

    pub fn with_confidence(mut self, confidence: f64) -> Self {
        self.confidence = confidence;
        self
    }

    pub fn with_context(mut self, kind: ContextKind, text: &str) -> Self {
        self.context = Some(TripleContext {
            kind,
            text: text.to_string(),
        });
        self
    }
}

/// Renders the canonical text form.
pub fn format_triple(triple: &TripleExtraction) -> String {
    let mut out = format!(
        "{}: ({}; {}; {})",
        triple.confidence, triple.arg1.text, triple.rel.text, triple.arg2.text
    );
    if let Some(context) = &triple.context {
        let kind = match context.kind {
            ContextKind::Attribution => "attrib",
            ContextKind::Condition => "enabler",
        };
        out.push_str(&format!("[{kind}={}]", context.text));
    }
    out
}

/// Parses one triple line. The confidence prefix defaults to 1.0.
pub fn parse_triple(line: &str) -> Result<TripleExtraction, TripleParseError> {
    let malformed = |message: &str| TripleParseError::Malformed(message.to_string());
    let s = line.trim();

    let (body, context) = if let Some(stripped) = s.strip_suffix(']') {
        let open = stripped
            .rfind('[')
            .ok_or_else(|| malformed("unmatched ']'"))?;
        let inner = &stripped[open + 1..];
        let (kind, text) = inner
            .split_once('=')
            .ok_or_else(|| malformed("context must be [attrib=...] or [enabler=...]"))?;
        let kind = match kind.trim() {
            "attrib" => ContextKind::Attribution,
            "enabler" => ContextKind::Condition,
            other => return Err(malformed(&format!("unknown context kind {other:?}"))),
        };
        (
            stripped[..open].trim_end(),
            Some(TripleContext {
                kind,
                text: text.trim().to_string(),
            }),
        )
    } else {
        (s, None)
    };

    let open = body.find('(').ok_or_else(|| malformed("missing '('"))?;
    let inner = body[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| malformed("missing closing ')'"))?;

    let prefix = body[..open].trim();
    let confidence = if prefix.is_empty() {
        1.0
    } else {
        let digits = prefix
            .strip_suffix(':')
            .ok_or_else(|| malformed("confidence prefix must end with ':'"))?;
        let d: f64 = digits
            .trim()
            .parse()
            .map_err(|_| malformed(&format!("bad confidence {digits:?}")))?;
        if !(0.0..=1.0).contains(&d) {
            return Err(malformed("confidence must lie in [0, 1]"));
        }
        d
    };

    let parts: Vec<&str> = inner.split(';').collect();
    if parts.len() != 3 {
        return Err(malformed(&format!(
            "expected 2 ';' delimiters, found {}",
            parts.len().saturating_sub(1)
        )));
    }
    let fields: Vec<&str> = parts.iter().map(|p| p.trim()).collect();
    if fields.iter().any(|f| f.is_empty()) {
        return Err(malformed("empty arg or relation field"));
    }

    let mut triple =
        TripleExtraction::from_texts(fields[0], fields[1], fields[2]).with_confidence(confidence);
    triple.context = context;
    Ok(triple)
}

/// A group of triples sharing one source sentence in an ingestion file.
#[derive(Clone, Debug, PartialEq)]
pub struct IngestedBlock {
    /// The raw lines of the block.
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub triples: Vec<TripleExtraction>,
}

/// Reads a pre-extracted triples file: one triple per line, `#` comments,
/// blank lines separate sentences. Triples carry their block's sentence
/// ordinal.
pub fn parse_ingestion(text: &str) -> Result<Vec<IngestedBlock>, TripleParseError> {
    let mut blocks: Vec<IngestedBlock> = Vec::new();
    let mut current: Option<IngestedBlock> = None;
    let mut offset = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_start = offset;
        offset += raw.len() + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if let Some(block) = current.take() {
                blocks.push(block);
            }
            continue;
        }
        let mut triple = parse_triple(line).map_err(|e| match e {
            TripleParseError::Malformed(message) => TripleParseError::MalformedAt {
                line: idx + 1,
                message,
            },
            other => other,
        })?;
        triple.sentence = blocks.len();
        let block = current.get_or_insert_with(|| IngestedBlock {
            text: String::new(),
            start: line_start,
            end: line_start,
            triples: Vec::new(),
        });
        if !block.text.is_empty() {
            block.text.push('\n');
        }
        block.text.push_str(raw);
        block.end = line_start + raw.len();
        block.triples.push(triple);
    }
    if let Some(block) = current.take() {
        blocks.push(block);
    }
    Ok(blocks)
}
