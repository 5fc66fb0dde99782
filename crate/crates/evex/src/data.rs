//! Bundled default assets: the management-change schema and rules, the
//! gazetteers, the tag lexicon, irregular verbs, and abbreviations.
//!
//! Everything here is compiled in, so the library works without any data
//! files on disk. The same files live under `data/` for the CLI.

use std::sync::LazyLock;

use crate::lemma::LemmaRules;
use crate::ner::{EntityType, Gazetteer};
use crate::oie::{AbbreviationList, TagLexicon};
use crate::ontology::OntologySchema;
use crate::rules::Rule;

pub const MANAGEMENT_CHANGE_SCHEMA: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/management_change.schema"));
pub const MANAGEMENT_CHANGE_RULES: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/management_change.rules"));
pub const POS_LEXICON: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/pos_lexicon.tsv"));
pub const IRREGULAR_VERBS: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/irregular_verbs.tsv"));
pub const ABBREVIATIONS: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/abbreviations.txt"));
pub const PERSON_GAZETTEER: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/gazetteers/person.txt"));
pub const ORGANIZATION_GAZETTEER: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/gazetteers/organization.txt"));
pub const POSITION_GAZETTEER: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/gazetteers/position.txt"));
pub const LOCATION_GAZETTEER: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/gazetteers/location.txt"));

static TAG_LEXICON: LazyLock<TagLexicon> =
    LazyLock::new(|| TagLexicon::parse(POS_LEXICON).expect("bundled lexicon parses"));

static LEMMA_RULES: LazyLock<LemmaRules> = LazyLock::new(|| {
    let lexicon = tag_lexicon();
    LemmaRules::new(
        LemmaRules::parse_irregulars(IRREGULAR_VERBS).expect("bundled irregulars parse"),
        lexicon.verb_stems().iter().cloned(),
        lexicon.adpositions().map(str::to_string),
        lexicon.modifiers().map(str::to_string),
    )
});

static ABBREVIATION_LIST: LazyLock<AbbreviationList> =
    LazyLock::new(|| AbbreviationList::parse(ABBREVIATIONS));

/// The bundled word -> tag lexicon.
pub fn tag_lexicon() -> &'static TagLexicon {
    &TAG_LEXICON
}

/// Lemmatizer rules backed by the bundled lexicon and irregular table.
pub fn lemma_rules() -> &'static LemmaRules {
    &LEMMA_RULES
}

/// Abbreviations guarding the sentence splitter.
pub fn abbreviations() -> &'static AbbreviationList {
    &ABBREVIATION_LIST
}

/// The bundled management-change schema.
pub fn management_change_schema() -> OntologySchema {
    OntologySchema::parse(MANAGEMENT_CHANGE_SCHEMA).expect("bundled schema parses")
}

/// The bundled management-change rule set.
pub fn management_change_rules() -> Vec<Rule> {
    crate::rules::parse_rules(MANAGEMENT_CHANGE_RULES).expect("bundled rules parse")
}

/// The bundled gazetteers (person, organization, position, location).
pub fn gazetteer() -> Gazetteer {
    let mut gazetteer = Gazetteer::new();
    gazetteer.add_entries(EntityType::Person, PERSON_GAZETTEER);
    gazetteer.add_entries(EntityType::Organization, ORGANIZATION_GAZETTEER);
    gazetteer.add_entries(EntityType::Position, POSITION_GAZETTEER);
    gazetteer.add_entries(EntityType::Location, LOCATION_GAZETTEER);
    gazetteer
}
