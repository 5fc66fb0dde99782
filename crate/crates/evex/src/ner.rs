//! Gazetteer-based named-entity recognition with date patterns and a
//! capitalization shape heuristic.
//!
//! Recognition runs three passes over one token sequence: a greedy
//! longest-window gazetteer scan, date patterns over the uncovered tokens,
//! and finally shape runs of capitalized unknown tokens. Passes never
//! overlap, so gazetteer hits always beat the heuristics on a span.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oie::{tokenize, PosTag, Token};

#[derive(Debug, Error)]
pub enum NerError {
    #[error("unrecognized gazetteer file {0:?}: expected <type>.txt with a known entity type")]
    UnknownGazetteerFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EntityType {
    Person,
    Organization,
    Position,
    Date,
    Location,
}

impl EntityType {
    pub const ALL: [EntityType; 5] = [
        EntityType::Person,
        EntityType::Organization,
        EntityType::Position,
        EntityType::Date,
        EntityType::Location,
    ];

    fn file_stem(self) -> &'static str {
        match self {
            EntityType::Person => "person",
            EntityType::Organization => "organization",
            EntityType::Position => "position",
            EntityType::Date => "date",
            EntityType::Location => "location",
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            EntityType::Person => "PERSON",
            EntityType::Organization => "ORGANIZATION",
            EntityType::Position => "POSITION",
            EntityType::Date => "DATE",
            EntityType::Location => "LOCATION",
        };
        f.write_str(name)
    }
}

impl FromStr for EntityType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_uppercase().as_str() {
            "PERSON" => Ok(EntityType::Person),
            "ORGANIZATION" | "ORG" => Ok(EntityType::Organization),
            "POSITION" => Ok(EntityType::Position),
            "DATE" => Ok(EntityType::Date),
            "LOCATION" | "LOC" => Ok(EntityType::Location),
            other => Err(format!("unknown entity type {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MentionSource {
    Gazetteer,
    ShapeHeuristic,
    DatePattern,
}

/// A typed mention over a token index range (half-open).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntityMention {
    pub surface: String,
    pub entity_type: EntityType,
    pub span: (usize, usize),
    pub source: MentionSource,
}

/// Tie-break order when one surface is listed under several types.
pub const DEFAULT_PRIORITY: [EntityType; 5] = [
    EntityType::Position,
    EntityType::Person,
    EntityType::Organization,
    EntityType::Location,
    EntityType::Date,
];

const CORPORATE_SUFFIXES: [&str; 4] = ["inc", "bank", "ltd", "university"];

/// Per-type surface lists. Lookup is case-insensitive; stored casing is
/// preserved in the entry sets.
#[derive(Clone, Debug)]
pub struct Gazetteer {
    entries: HashMap<EntityType, IndexSet<String>>,
    index: HashMap<String, Vec<EntityType>>,
    max_window: usize,
    priority: Vec<EntityType>,
}

impl Default for Gazetteer {
    fn default() -> Self {
        Gazetteer {
            entries: HashMap::new(),
            index: HashMap::new(),
            max_window: 0,
            priority: DEFAULT_PRIORITY.to_vec(),
        }
    }
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads `<type>.txt` files (person, organization, position, location,
    /// date) from a directory. An empty directory is a legal, empty
    /// gazetteer; other `.txt` names are an error.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, NerError> {
        let mut gazetteer = Gazetteer::new();
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .map(|e| e.path())
            .collect();
        paths.sort();
        for path in paths {
            if path.extension().and_then(|e| e.to_str()) != Some("txt") {
                continue;
            }
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default();
            let Some(entity_type) = EntityType::ALL
                .into_iter()
                .find(|t| t.file_stem() == stem)
            else {
                return Err(NerError::UnknownGazetteerFile(
                    path.display().to_string(),
                ));
            };
            let text = std::fs::read_to_string(&path)?;
            gazetteer.add_entries(entity_type, &text);
        }
        Ok(gazetteer)
    }

    /// Adds one entry block: one surface per line, `#` comments allowed.
    pub fn add_entries(&mut self, entity_type: EntityType, text: &str) {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.add(entity_type, line);
        }
    }

    pub fn add(&mut self, entity_type: EntityType, surface: &str) {
        let tokens = tokenize(surface);
        if tokens.is_empty() {
            return;
        }
        let key = normalized_key(tokens.iter().map(|t| t.text.as_str()));
        self.max_window = self.max_window.max(tokens.len());
        self.entries
            .entry(entity_type)
            .or_default()
            .insert(surface.to_string());
        let types = self.index.entry(key).or_default();
        if !types.contains(&entity_type) {
            types.push(entity_type);
        }
    }

    pub fn with_priority(mut self, priority: Vec<EntityType>) -> Self {
        self.priority = priority;
        self
    }

    pub fn set_priority(&mut self, priority: Vec<EntityType>) {
        self.priority = priority;
    }

    pub fn entries(&self, entity_type: EntityType) -> impl Iterator<Item = &str> {
        self.entries
            .get(&entity_type)
            .into_iter()
            .flat_map(|set| set.iter().map(String::as_str))
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    fn lookup(&self, key: &str) -> Option<EntityType> {
        let types = self.index.get(key)?;
        for preferred in self.priority.iter().chain(DEFAULT_PRIORITY.iter()) {
            if types.contains(preferred) {
                return Some(*preferred);
            }
        }
        types.first().copied()
    }
}

fn normalized_key<'a>(texts: impl Iterator<Item = &'a str>) -> String {
    texts
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

const MONTHS: [&str; 23] = [
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep",
    "oct", "nov", "dec",
];

fn is_month(text: &str) -> bool {
    MONTHS.contains(&text.to_lowercase().as_str())
}

fn is_year(text: &str) -> bool {
    text.len() == 4
        && text.chars().all(|c| c.is_ascii_digit())
        && (text.starts_with("19") || text.starts_with("20"))
}

fn is_day(text: &str) -> bool {
    let digits = text
        .strip_suffix("st")
        .or_else(|| text.strip_suffix("nd"))
        .or_else(|| text.strip_suffix("rd"))
        .or_else(|| text.strip_suffix("th"))
        .unwrap_or(text);
    !digits.is_empty()
        && digits.len() <= 2
        && digits.chars().all(|c| c.is_ascii_digit())
        && (1..=31).contains(&digits.parse::<u32>().unwrap_or(0))
}

/// Recognizes typed mentions. Tokens may be tagged or raw; tags narrow the
/// shape heuristic to noun-like tokens.
pub fn recognize(tokens: &[Token], gazetteer: &Gazetteer) -> Vec<EntityMention> {
    let n = tokens.len();
    let mut covered = vec![false; n];
    let mut mentions = Vec::new();

    // Pass 1: greedy left-to-right gazetteer scan, longest window first.
    if !gazetteer.is_empty() {
        let max_window = gazetteer.max_window.min(n);
        let mut start = 0;
        while start < n {
            if covered[start] {
                start += 1;
                continue;
            }
            let mut matched = false;
            for len in (1..=max_window.min(n - start)).rev() {
                let window = &tokens[start..start + len];
                if window.iter().enumerate().any(|(i, _)| covered[start + i]) {
                    continue;
                }
                let key = normalized_key(window.iter().map(|t| t.text.as_str()));
                if let Some(entity_type) = gazetteer.lookup(&key) {
                    covered[start..start + len].iter_mut().for_each(|c| *c = true);
                    mentions.push(mention(tokens, start, start + len, entity_type, MentionSource::Gazetteer));
                    start += len;
                    matched = true;
                    break;
                }
            }
            if !matched {
                start += 1;
            }
        }
    }

    // Pass 2: date patterns on uncovered tokens.
    let mut start = 0;
    while start < n {
        if covered[start] {
            start += 1;
            continue;
        }
        let free = |from: usize, len: usize| {
            from + len <= n && !covered[from..from + len].iter().any(|c| *c)
        };
        let text = |i: usize| tokens[i].text.as_str();
        let date_len = if free(start, 4)
            && is_month(text(start))
            && is_day(text(start + 1))
            && text(start + 2) == ","
            && is_year(text(start + 3))
        {
            Some(4)
        } else if free(start, 3)
            && is_day(text(start))
            && is_month(text(start + 1))
            && is_year(text(start + 2))
        {
            Some(3)
        } else if free(start, 2) && is_month(text(start)) && is_day(text(start + 1)) {
            Some(2)
        } else if free(start, 1) && is_year(text(start)) {
            Some(1)
        } else {
            None
        };
        if let Some(len) = date_len {
            covered[start..start + len].iter_mut().for_each(|c| *c = true);
            mentions.push(mention(tokens, start, start + len, EntityType::Date, MentionSource::DatePattern));
            start += len;
        } else {
            start += 1;
        }
    }

    // Pass 3: shape runs of capitalized unknown tokens.
    let eligible = |covered: &[bool], i: usize| {
        !covered[i]
            && tokens[i].is_capitalized()
            && tokens[i].text.chars().count() >= 2
            && matches!(
                tokens[i].pos,
                None | Some(PosTag::Noun) | Some(PosTag::Propn) | Some(PosTag::Other)
            )
    };
    let mut start = 0;
    while start < n {
        if !eligible(&covered, start) {
            start += 1;
            continue;
        }
        let mut end = start + 1;
        while end < n && eligible(&covered, end) {
            end += 1;
        }
        let run = &tokens[start..end];
        let organization = run.iter().any(|t| t.is_all_caps())
            || run
                .iter()
                .any(|t| CORPORATE_SUFFIXES.contains(&t.text.to_lowercase().as_str()));
        let entity_type = if organization {
            Some(EntityType::Organization)
        } else if run.len() <= 2 {
            Some(EntityType::Person)
        } else {
            None
        };
        if let Some(entity_type) = entity_type {
            covered[start..end].iter_mut().for_each(|c| *c = true);
            mentions.push(mention(tokens, start, end, entity_type, MentionSource::ShapeHeuristic));
        }
        start = end;
    }

    mentions.sort_by_key(|m| m.span.0);
    mentions
}

fn mention(
    tokens: &[Token],
    start: usize,
    end: usize,
    entity_type: EntityType,
    source: MentionSource,
) -> EntityMention {
    let surface = tokens[start..end]
        .iter()
        .map(|t| t.text.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    EntityMention {
        surface,
        entity_type,
        span: (start, end),
        source,
    }
}
