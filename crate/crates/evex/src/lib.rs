//! Batch event extraction from natural-language text.
//!
//! `evex` turns sentences into typed event records by chaining five steps:
//!
//! 1. open relation-triple extraction ([`oie`]) — or ingestion of
//!    pre-extracted triples in the same textual format,
//! 2. gazetteer named-entity recognition over the triple tokens ([`ner`]),
//! 3. verb lemmatization ([`lemma`]),
//! 4. an ontology-gated adaptation step that admits triples with enough
//!    entities and known relations into a per-document instance store
//!    ([`adaptation`], [`ontology`]),
//! 5. forward-chaining rule inference that assigns event roles ([`rules`]).
//!
//! [`pipeline`] wires the steps together and [`eval`] scores the output
//! against gold annotations. [`data`] carries a ready-to-use
//! management-change schema, rule set, and gazetteers.
//!
//! ```
//! use evex::pipeline::{extract_text_document, PipelineAssets};
//!
//! let assets = PipelineAssets::bundled();
//! let out = extract_text_document("news", "QNB appoints Mark as a president.", &assets)?;
//! let record = &out.records[0];
//! assert_eq!(record.participants[0].roles, vec!["IN_ORG".to_string()]);
//! # Ok::<(), evex::pipeline::PipelineError>(())
//! ```
//!
//! Each runnable example under `examples/` demonstrates one capability;
//! the `evex` binary exposes the same pipeline as `extract`, `eval`, and
//! `validate` subcommands.

pub mod adaptation;
pub mod data;
pub mod eval;
pub mod lemma;
pub mod ner;
pub mod oie;
pub mod ontology;
pub mod pipeline;
pub mod rules;
