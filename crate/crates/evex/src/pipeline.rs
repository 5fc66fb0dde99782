//! End-to-end batch extraction and evaluation.
//!
//! One document flows through sentence splitting, tagging, triple
//! extraction (or ingestion of pre-extracted triples), recognition,
//! adaptation into a fresh instance store, and rule inference. Every
//! accepted triple whose instances ended up holding roles becomes one
//! [`EventRecord`]. Documents are independent, and identical inputs
//! produce byte-identical outputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adaptation::{adapt_document, prepare_from_sentence, prepare_standalone, AdaptationResult, PreparedTriple};
use crate::data;
use crate::eval::{score, EvalError, EvalReport, GoldAnnotations};
use crate::ner::{EntityType, Gazetteer, NerError};
use crate::oie::{
    extract_triples, lexical_filter, parse_ingestion, pos_tag, split_sentences, tokenize,
    RelationFrequencyTable, TripleParseError,
};
use crate::ontology::{InstanceStore, OntologyError, OntologySchema};
use crate::rules::{infer_with_trace, parse_rules, validate_rules, InferenceResult, Rule, RuleError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema: {0}")]
    Schema(OntologyError),
    #[error("rules: {0}")]
    Rules(RuleError),
    #[error("gazetteers: {0}")]
    Ner(NerError),
    #[error("triples: {0}")]
    Triples(TripleParseError),
    #[error("lexical filter: {0}")]
    Filter(crate::oie::FilterParseError),
    #[error("gold: {0}")]
    Gold(EvalError),
    #[error("predictions {path} line {line}: {message}")]
    Predictions {
        path: String,
        line: usize,
        message: String,
    },
}

impl PipelineError {
    /// 1 for configuration/IO problems, 2 for content parse errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::Io { .. } => 1,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    NativeOie,
    Ingested,
}

/// One participant of an extracted event: an instance holding roles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Participant {
    pub surface: String,
    pub class: String,
    pub roles: Vec<String>,
}

/// The sentence (or triple block) a record came from, with byte offsets
/// into the source document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceRef {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// One extracted event.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub document: String,
    pub sentence: SentenceRef,
    pub participants: Vec<Participant>,
    pub links: Vec<(String, String, String)>,
    pub confidence: f64,
    pub provenance: Provenance,
}

/// Everything `extract` needs on disk.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub schema: PathBuf,
    pub rules: PathBuf,
    pub gazetteers: PathBuf,
    pub inputs: Vec<PathBuf>,
    pub triples: Option<PathBuf>,
    pub output: PathBuf,
    pub format: OutputFormat,
    pub trace_adaptation: bool,
    pub lexical_filter: Option<PathBuf>,
    pub threshold: u64,
    pub ner_priority: Option<Vec<EntityType>>,
}

/// Loaded, validated inputs shared by every document.
#[derive(Clone, Debug)]
pub struct PipelineAssets {
    pub schema: OntologySchema,
    pub rules: Vec<Rule>,
    pub gazetteer: Gazetteer,
    pub filter: Option<RelationFrequencyTable>,
}

impl PipelineAssets {
    /// The compiled-in management-change schema, rules, and gazetteers.
    pub fn bundled() -> Self {
        PipelineAssets {
            schema: data::management_change_schema(),
            rules: data::management_change_rules(),
            gazetteer: data::gazetteer(),
            filter: None,
        }
    }

    pub fn load(config: &RunConfig) -> Result<Self, PipelineError> {
        let schema =
            OntologySchema::parse(&read(&config.schema)?).map_err(PipelineError::Schema)?;
        let rules = parse_rules(&read(&config.rules)?).map_err(PipelineError::Rules)?;
        validate_rules(&schema, &rules).map_err(PipelineError::Rules)?;
        let mut gazetteer = Gazetteer::load_dir(&config.gazetteers).map_err(|e| match e {
            NerError::Io(source) => PipelineError::Io {
                path: config.gazetteers.display().to_string(),
                source,
            },
            other => PipelineError::Ner(other),
        })?;
        if let Some(priority) = &config.ner_priority {
            gazetteer.set_priority(priority.clone());
        }
        let filter = match &config.lexical_filter {
            Some(path) => Some(
                RelationFrequencyTable::parse(&read(path)?, config.threshold)
                    .map_err(PipelineError::Filter)?,
            ),
            None => None,
        };
        Ok(PipelineAssets {
            schema,
            rules,
            gazetteer,
            filter,
        })
    }
}

/// Everything produced for one document.
#[derive(Debug)]
pub struct DocumentExtraction {
    pub records: Vec<EventRecord>,
    pub results: Vec<AdaptationResult>,
    pub inference: InferenceResult,
}

impl DocumentExtraction {
    /// The populated, inferred store.
    pub fn store(&self) -> &InstanceStore {
        &self.inference.store
    }
}

/// Runs the full pipeline over one plain-text document.
pub fn extract_text_document(
    document: &str,
    text: &str,
    assets: &PipelineAssets,
) -> Result<DocumentExtraction, PipelineError> {
    let sentences = split_sentences(text, data::abbreviations());
    let mut sentence_refs = Vec::new();
    let mut prepared: Vec<PreparedTriple> = Vec::new();

    for (ordinal, sentence) in sentences.iter().enumerate() {
        sentence_refs.push(SentenceRef {
            text: sentence.text.to_string(),
            start: sentence.start,
            end: sentence.end,
        });
        let tokens = pos_tag(tokenize(sentence.text), data::tag_lexicon());
        let mut triples = extract_triples(sentence.text, &tokens);
        for triple in &mut triples {
            triple.sentence = ordinal;
        }
        let triples = lexical_filter(triples, assets.filter.as_ref(), data::lemma_rules());
        prepared.extend(
            triples
                .iter()
                .map(|t| prepare_from_sentence(t, &tokens)),
        );
    }

    finish_document(document, sentence_refs, prepared, assets, Provenance::NativeOie)
}

/// Runs the pipeline over a pre-extracted triples file (one document).
pub fn extract_ingested_document(
    document: &str,
    text: &str,
    assets: &PipelineAssets,
) -> Result<DocumentExtraction, PipelineError> {
    let blocks = parse_ingestion(text).map_err(PipelineError::Triples)?;
    let mut sentence_refs = Vec::new();
    let mut prepared = Vec::new();
    for block in &blocks {
        sentence_refs.push(SentenceRef {
            text: block.text.clone(),
            start: block.start,
            end: block.end,
        });
        prepared.extend(
            block
                .triples
                .iter()
                .map(|t| prepare_standalone(t, data::tag_lexicon())),
        );
    }
    finish_document(document, sentence_refs, prepared, assets, Provenance::Ingested)
}

fn finish_document(
    document: &str,
    sentence_refs: Vec<SentenceRef>,
    prepared: Vec<PreparedTriple>,
    assets: &PipelineAssets,
    provenance: Provenance,
) -> Result<DocumentExtraction, PipelineError> {
    let (store, results) = adapt_document(
        &prepared,
        &assets.schema,
        &assets.gazetteer,
        data::lemma_rules(),
    );
    store.validate(&assets.schema).map_err(PipelineError::Schema)?;
    let inference =
        infer_with_trace(&assets.schema, &store, &assets.rules).map_err(PipelineError::Rules)?;

    let mut records = Vec::new();
    for result in &results {
        if !result.accepted {
            continue;
        }
        let participants: Vec<Participant> = result
            .instances
            .iter()
            .filter_map(|(id, _)| {
                let instance = inference.store.get(*id)?;
                if instance.roles.is_empty() {
                    return None;
                }
                Some(Participant {
                    surface: instance.surface.clone(),
                    class: instance.class.clone(),
                    roles: instance.roles.iter().cloned().collect(),
                })
            })
            .collect();
        if participants.is_empty() {
            continue;
        }
        let links = result
            .links
            .iter()
            .map(|(s, r, o)| {
                (
                    inference.store.get(*s).expect("linked id exists").surface.clone(),
                    r.clone(),
                    inference.store.get(*o).expect("linked id exists").surface.clone(),
                )
            })
            .collect();
        records.push(EventRecord {
            document: document.to_string(),
            sentence: sentence_refs
                .get(result.triple.sentence)
                .cloned()
                .unwrap_or(SentenceRef {
                    text: String::new(),
                    start: 0,
                    end: 0,
                }),
            participants,
            links,
            confidence: result.triple.confidence,
            provenance,
        });
    }

    Ok(DocumentExtraction {
        records,
        results,
        inference,
    })
}

fn document_id(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("document")
        .to_string()
}

/// Runs `extract` over every configured input, writes the output file, and
/// returns the records. Documents that fail to process are reported on
/// stderr and skipped; they never abort the batch.
pub fn run_extract(config: &RunConfig) -> Result<Vec<EventRecord>, PipelineError> {
    if config.inputs.is_empty() == config.triples.is_none() {
        return Err(PipelineError::Config(
            "exactly one of --input and --triples is required".to_string(),
        ));
    }
    let assets = PipelineAssets::load(config)?;

    let mut records = Vec::new();
    let mut process = |document: String,
                       extraction: Result<DocumentExtraction, PipelineError>| {
        match extraction {
            Ok(extraction) => {
                if config.trace_adaptation {
                    for line in trace_lines(&extraction) {
                        eprintln!("{line}");
                    }
                }
                records.extend(extraction.records);
            }
            Err(error) => eprintln!("skipping {document}: {error}"),
        }
    };

    if let Some(path) = &config.triples {
        let document = document_id(path);
        let extraction =
            read(path).and_then(|text| extract_ingested_document(&document, &text, &assets));
        process(document, extraction);
    } else {
        for path in &config.inputs {
            let document = document_id(path);
            let extraction =
                read(path).and_then(|text| extract_text_document(&document, &text, &assets));
            process(document, extraction);
        }
    }

    let rendered = match config.format {
        OutputFormat::Json => render_json(&records),
        OutputFormat::Tsv => render_tsv(&records),
    };
    std::fs::write(&config.output, rendered).map_err(|source| PipelineError::Io {
        path: config.output.display().to_string(),
        source,
    })?;
    Ok(records)
}

/// One JSON line per adaptation result, for `--trace-adaptation`.
pub fn trace_lines(extraction: &DocumentExtraction) -> Vec<String> {
    #[derive(Serialize)]
    struct TraceLine<'a> {
        accepted: bool,
        reason: crate::adaptation::AdaptReason,
        triple: String,
        links: Vec<(&'a str, &'a str, &'a str)>,
    }
    extraction
        .results
        .iter()
        .map(|result| {
            let store = extraction.store();
            let line = TraceLine {
                accepted: result.accepted,
                reason: result.reason,
                triple: crate::oie::format_triple(&result.triple),
                links: result
                    .links
                    .iter()
                    .map(|(s, r, o)| {
                        (
                            store.get(*s).expect("linked id").surface.as_str(),
                            r.as_str(),
                            store.get(*o).expect("linked id").surface.as_str(),
                        )
                    })
                    .collect(),
            };
            serde_json::to_string(&line).expect("trace line serializes")
        })
        .collect()
}

/// JSON-lines rendering: one record per line, stable field order.
pub fn render_json(records: &[EventRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// TSV rendering: one row per participant.
pub fn render_tsv(records: &[EventRecord]) -> String {
    let mut out = String::from(
        "document\tsentence_start\tsurface\tclass\troles\tconfidence\tprovenance\tlinks\n",
    );
    for record in records {
        let links = record
            .links
            .iter()
            .map(|(s, r, o)| format!("{s}->{r}->{o}"))
            .collect::<Vec<_>>()
            .join("|");
        let provenance = match record.provenance {
            Provenance::NativeOie => "native-oie",
            Provenance::Ingested => "ingested",
        };
        for participant in &record.participants {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                record.document,
                record.sentence.start,
                participant.surface,
                participant.class,
                participant.roles.join(","),
                record.confidence,
                provenance,
                links,
            ));
        }
    }
    out
}

/// Reads back a JSON-lines predictions file.
pub fn read_records(path: &Path) -> Result<Vec<EventRecord>, PipelineError> {
    let text = read(path)?;
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: EventRecord =
            serde_json::from_str(line).map_err(|e| PipelineError::Predictions {
                path: path.display().to_string(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        records.push(record);
    }
    Ok(records)
}

/// Flattens records into (document, surface, role) prediction pairs.
pub fn prediction_pairs(records: &[EventRecord]) -> Vec<(String, String, String)> {
    let mut pairs = Vec::new();
    for record in records {
        for participant in &record.participants {
            for role in &participant.roles {
                let triple = (
                    record.document.clone(),
                    participant.surface.clone(),
                    role.clone(),
                );
                if !pairs.contains(&triple) {
                    pairs.push(triple);
                }
            }
        }
    }
    pairs
}

/// Scores a predictions file against gold annotations, optionally writing
/// the CSV report. The schema, when given, completes the per-role table.
pub fn run_eval(
    predictions: &Path,
    gold: &Path,
    report: Option<&Path>,
    schema: Option<&Path>,
) -> Result<EvalReport, PipelineError> {
    let records = read_records(predictions)?;
    let gold = GoldAnnotations::parse(&read(gold)?).map_err(PipelineError::Gold)?;
    let roles: Vec<String> = match schema {
        Some(path) => OntologySchema::parse(&read(path)?)
            .map_err(PipelineError::Schema)?
            .roles()
            .map(|(role, _)| role.to_string())
            .collect(),
        None => Vec::new(),
    };
    let eval_report = score(&prediction_pairs(&records), &gold, &roles);
    if let Some(path) = report {
        std::fs::write(path, eval_report.render_csv()).map_err(|source| PipelineError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(eval_report)
}
