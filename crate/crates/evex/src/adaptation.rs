//! The ontology input gate and matcher.
//!
//! A triple qualifies for ontology entry when it carries at least two
//! recognized entities (context mentions count) and every relation word —
//! the lemmatized verb head plus each standalone preposition in the
//! relation phrase — is in the schema's relation vocabulary. Accepted
//! mentions become instances and are chained in textual order: the first
//! mention links to the second by the verb lemma, and later mentions link
//! by the corresponding secondary relation word. Rejection leaves the
//! store untouched.

use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::lemma::LemmaRules;
use crate::ner::{recognize, EntityMention, EntityType, Gazetteer};
use crate::oie::{pos_tag, tokenize, PosTag, TagLexicon, Token, TripleExtraction};
use crate::ontology::{InstanceId, InstanceStore, OntologySchema};

/// Why a triple was or was not admitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdaptReason {
    Ok,
    TooFewEntities,
    RelationNotInOntology,
}

/// Outcome of adapting one triple.
#[derive(Clone, Debug)]
pub struct AdaptationResult {
    pub accepted: bool,
    pub reason: AdaptReason,
    pub instances: Vec<(InstanceId, EntityMention)>,
    pub links: Vec<(InstanceId, String, InstanceId)>,
    pub triple: TripleExtraction,
}

/// Token index ranges of the triple parts inside [`PreparedTriple::tokens`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleZones {
    pub arg1: Range<usize>,
    pub rel: Range<usize>,
    pub arg2: Range<usize>,
    pub context: Option<Range<usize>>,
}

/// A triple together with its full token sequence (arguments, relation,
/// and any attribution/condition context) ready for recognition.
#[derive(Clone, Debug)]
pub struct PreparedTriple {
    pub triple: TripleExtraction,
    pub tokens: Vec<Token>,
    pub zones: TripleZones,
}

/// Maps an entity type to its ontology class. LOCATION has no class in the
/// management-change schema and maps to nothing.
pub fn ontology_class(entity_type: EntityType) -> Option<&'static str> {
    match entity_type {
        EntityType::Person => Some("Person"),
        EntityType::Organization => Some("Organization"),
        EntityType::Position => Some("Position"),
        EntityType::Date => Some("Date"),
        EntityType::Location => None,
    }
}

/// Builds the token sequence for a natively extracted triple by slicing
/// the (tagged) sentence tokens with the triple's spans.
pub fn prepare_from_sentence(triple: &TripleExtraction, sentence_tokens: &[Token]) -> PreparedTriple {
    let mut tokens = Vec::new();
    let mut zones = Vec::new();
    for span in [triple.arg1.span, triple.rel.span, triple.arg2.span] {
        let start = tokens.len();
        tokens.extend(
            sentence_tokens
                .iter()
                .filter(|t| t.span.0 >= span.0 && t.span.1 <= span.1)
                .cloned(),
        );
        zones.push(start..tokens.len());
    }
    PreparedTriple {
        triple: triple.clone(),
        tokens,
        zones: TripleZones {
            arg1: zones[0].clone(),
            rel: zones[1].clone(),
            arg2: zones[2].clone(),
            context: None,
        },
    }
}

/// Builds the token sequence for an ingested triple by tokenizing its
/// parts (context included) and tagging the combined sequence.
pub fn prepare_standalone(triple: &TripleExtraction, lexicon: &TagLexicon) -> PreparedTriple {
    let mut parts: Vec<&str> = vec![&triple.arg1.text, &triple.rel.text, &triple.arg2.text];
    if let Some(context) = &triple.context {
        parts.push(&context.text);
    }
    let mut tokens = Vec::new();
    let mut zones = Vec::new();
    let mut offset = 0usize;
    for part in parts {
        let start = tokens.len();
        for mut token in tokenize(part) {
            token.span = (token.span.0 + offset, token.span.1 + offset);
            tokens.push(token);
        }
        zones.push(start..tokens.len());
        offset += part.len() + 1;
    }
    let tokens = pos_tag(tokens, lexicon);
    PreparedTriple {
        triple: triple.clone(),
        tokens,
        zones: TripleZones {
            arg1: zones[0].clone(),
            rel: zones[1].clone(),
            arg2: zones[2].clone(),
            context: zones.get(3).cloned(),
        },
    }
}

/// Keeps, per sentence and per lemmatized verbal part, the triple with the
/// highest certainty degree. Ties go to the earliest first argument, then
/// to input order. Survivors keep their input order.
pub fn select_best(triples: &[TripleExtraction], lemma: &LemmaRules) -> Vec<TripleExtraction> {
    select_best_indices(triples, lemma)
        .into_iter()
        .map(|i| triples[i].clone())
        .collect()
}

pub(crate) fn select_best_indices(triples: &[TripleExtraction], lemma: &LemmaRules) -> Vec<usize> {
    let mut best: HashMap<(usize, String), usize> = HashMap::new();
    for (index, triple) in triples.iter().enumerate() {
        let verbal_part = lemma
            .lemmatize_verb_phrase(&triple.rel.text)
            .unwrap_or_else(|_| triple.rel.text.to_lowercase());
        let key = (triple.sentence, verbal_part);
        match best.get(&key) {
            None => {
                best.insert(key, index);
            }
            Some(&held) => {
                let challenger = &triples[index];
                let incumbent = &triples[held];
                let replace = match challenger.confidence.total_cmp(&incumbent.confidence) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Equal => {
                        challenger.arg1.span.0 < incumbent.arg1.span.0
                    }
                    std::cmp::Ordering::Less => false,
                };
                if replace {
                    best.insert(key, index);
                }
            }
        }
    }
    let mut kept: Vec<usize> = best.into_values().collect();
    kept.sort_unstable();
    kept
}

/// Applies the two admission gates and, on success, populates the store
/// with the triple's mentions and their relation links.
pub fn adapt(
    prepared: &PreparedTriple,
    mentions: &[EntityMention],
    schema: &OntologySchema,
    lemma: &LemmaRules,
    store: &mut InstanceStore,
) -> AdaptationResult {
    let reject = |reason: AdaptReason| AdaptationResult {
        accepted: false,
        reason,
        instances: Vec::new(),
        links: Vec::new(),
        triple: prepared.triple.clone(),
    };

    // Gate 1: at least two recognized entities, context included.
    if mentions.len() < 2 {
        return reject(AdaptReason::TooFewEntities);
    }

    // Gate 2: the lemmatized verb and every standalone relation word must
    // be in the ontology's relation vocabulary.
    let verb_lemma = lemma
        .lemmatize_verb_phrase(&prepared.triple.rel.text)
        .ok()
        .and_then(|phrase| phrase.split_whitespace().next().map(str::to_string));
    let Some(verb_lemma) = verb_lemma else {
        return reject(AdaptReason::RelationNotInOntology);
    };
    let relation_words: Vec<String> = prepared.tokens[prepared.zones.rel.clone()]
        .iter()
        .filter(|t| t.is(PosTag::Adp) || (t.pos.is_none() && lemma.is_adposition(&t.text)))
        .map(|t| t.text.to_lowercase())
        .collect();
    if !schema.has_relation(&verb_lemma)
        || relation_words.iter().any(|w| !schema.has_relation(w))
    {
        return reject(AdaptReason::RelationNotInOntology);
    }

    // Plan insertions before touching the store.
    let mut ordered: Vec<&EntityMention> = mentions.iter().collect();
    ordered.sort_by_key(|m| m.span.0);
    let planned: Vec<(&EntityMention, &'static str)> = ordered
        .iter()
        .filter_map(|m| {
            ontology_class(m.entity_type)
                .filter(|class| schema.has_class(class))
                .map(|class| (*m, class))
        })
        .collect();

    // The link chain runs over non-date mentions; when that leaves fewer
    // than two, dates join the chain instead of taking the in/on path.
    let mut chain: Vec<usize> = planned
        .iter()
        .enumerate()
        .filter(|(_, (m, _))| m.entity_type != EntityType::Date)
        .map(|(i, _)| i)
        .collect();
    if chain.len() < 2 {
        chain = (0..planned.len()).collect();
    }
    if chain.len() < 2 {
        return reject(AdaptReason::TooFewEntities);
    }

    let mut instances = Vec::new();
    let mut ids = Vec::new();
    for (mention, class) in &planned {
        let id = store
            .add_instance(schema, &mention.surface, class)
            .expect("class checked against schema");
        ids.push(id);
        instances.push((id, (*mention).clone()));
    }

    let mut links = Vec::new();
    let mut link = |store: &mut InstanceStore, s: usize, word: &str, o: usize| {
        store
            .link_instances(schema, ids[s], word, ids[o])
            .expect("relation checked against schema");
        links.push((ids[s], word.to_string(), ids[o]));
    };
    link(store, chain[0], &verb_lemma, chain[1]);
    for i in 1..chain.len() - 1 {
        match relation_words.get(i - 1) {
            Some(word) => link(store, chain[i], word, chain[i + 1]),
            None => break,
        }
    }

    // Dates outside the chain link through an in/on word separating the
    // relation from the date, when the schema knows that word. The window
    // includes the relation's boundary token on the date's side, since a
    // trailing preposition is part of the relation phrase.
    for (i, (mention, _)) in planned.iter().enumerate() {
        if chain.contains(&i) || mention.entity_type != EntityType::Date {
            continue;
        }
        let rel = &prepared.zones.rel;
        let (from, to) = if mention.span.1 <= rel.start {
            (mention.span.1, (rel.start + 1).min(rel.end))
        } else {
            (rel.end.saturating_sub(1).max(rel.start), mention.span.0)
        };
        let word = prepared.tokens[from.min(to)..to.max(from)]
            .iter()
            .map(|t| t.text.to_lowercase())
            .find(|w| (w == "in" || w == "on") && schema.has_relation(w));
        if let Some(word) = word {
            link(store, chain[0], &word, i);
        }
    }

    AdaptationResult {
        accepted: true,
        reason: AdaptReason::Ok,
        instances,
        links,
        triple: prepared.triple.clone(),
    }
}

/// Runs the whole adaptation step for one document: per-sentence
/// certainty selection, then recognition and admission of each surviving
/// triple into one shared store.
pub fn adapt_document(
    prepared: &[PreparedTriple],
    schema: &OntologySchema,
    gazetteer: &Gazetteer,
    lemma: &LemmaRules,
) -> (InstanceStore, Vec<AdaptationResult>) {
    let triples: Vec<TripleExtraction> = prepared.iter().map(|p| p.triple.clone()).collect();
    let kept = select_best_indices(&triples, lemma);

    let mut store = InstanceStore::new();
    let mut results = Vec::new();
    for index in kept {
        let prep = &prepared[index];
        let mentions = recognize(&prep.tokens, gazetteer);
        results.push(adapt(prep, &mentions, schema, lemma, &mut store));
    }
    (store, results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::oie::{extract_triples, parse_ingestion, parse_triple};

    fn prepare_native(sentence: &str) -> PreparedTriple {
        let tokens = pos_tag(tokenize(sentence), data::tag_lexicon());
        let triples = extract_triples(sentence, &tokens);
        assert_eq!(triples.len(), 1, "expected one triple for {sentence:?}");
        prepare_from_sentence(&triples[0], &tokens)
    }

    fn surfaces(store: &InstanceStore, links: &[(InstanceId, String, InstanceId)]) -> Vec<(String, String, String)> {
        links
            .iter()
            .map(|(s, r, o)| {
                (
                    store.get(*s).unwrap().surface.clone(),
                    r.clone(),
                    store.get(*o).unwrap().surface.clone(),
                )
            })
            .collect()
    }

    #[test]
    fn phrase_one_is_accepted_and_chained() {
        let schema = data::management_change_schema();
        let prep = prepare_native("QNB appoints Mark as a president");
        let mentions = recognize(&prep.tokens, &data::gazetteer());
        let mut store = InstanceStore::new();
        let result = adapt(&prep, &mentions, &schema, data::lemma_rules(), &mut store);

        assert!(result.accepted);
        assert_eq!(result.reason, AdaptReason::Ok);
        assert_eq!(store.len(), 3);
        assert_eq!(
            surfaces(&store, &result.links),
            vec![
                ("QNB".into(), "appoint".into(), "Mark".into()),
                ("Mark".into(), "as".into(), "president".into()),
            ]
        );
        let ids: Vec<String> = result.instances.iter().map(|(id, _)| id.to_string()).collect();
        assert_eq!(ids, ["input1", "input2", "input3"]);
    }

    #[test]
    fn phrase_two_links_person_to_position_by_leave() {
        let schema = data::management_change_schema();
        let prep = prepare_native("Nadine the CEO has left the company.");
        let mentions = recognize(&prep.tokens, &data::gazetteer());
        assert_eq!(mentions.len(), 2);
        let mut store = InstanceStore::new();
        let result = adapt(&prep, &mentions, &schema, data::lemma_rules(), &mut store);

        assert!(result.accepted);
        assert_eq!(
            surfaces(&store, &result.links),
            vec![("Nadine".into(), "leave".into(), "CEO".into())]
        );
    }

    #[test]
    fn one_mention_is_too_few_and_leaves_the_store_alone() {
        let schema = data::management_change_schema();
        let prep = prepare_native("Zara Ali joins the firm.");
        let mentions = recognize(&prep.tokens, &data::gazetteer());
        assert_eq!(mentions.len(), 1);
        let mut store = InstanceStore::new();
        let before = store.clone();
        let result = adapt(&prep, &mentions, &schema, data::lemma_rules(), &mut store);

        assert!(!result.accepted);
        assert_eq!(result.reason, AdaptReason::TooFewEntities);
        assert!(result.links.is_empty());
        assert_eq!(store, before);
    }

    #[test]
    fn unknown_relation_word_is_rejected() {
        let schema = data::management_change_schema();
        // "of" is not in the relation vocabulary.
        let triple = parse_triple("(Hang Zhihua; has left the board of; Union Bank)").unwrap();
        let prep = prepare_standalone(&triple, data::tag_lexicon());
        let mentions = recognize(&prep.tokens, &data::gazetteer());
        assert!(mentions.len() >= 2);
        let mut store = InstanceStore::new();
        let result = adapt(&prep, &mentions, &schema, data::lemma_rules(), &mut store);
        assert!(!result.accepted);
        assert_eq!(result.reason, AdaptReason::RelationNotInOntology);
        assert!(store.is_empty());
    }

    #[test]
    fn select_best_keeps_the_highest_certainty_per_verbal_part() {
        let lemma = data::lemma_rules();
        let low = parse_triple("0.71: (Hang Zhihua; has left; the board room)").unwrap();
        let high = parse_triple("0.93: (Hang Zhihua; has left; non-executive directors)").unwrap();
        let kept = select_best(&[low, high.clone()], lemma);
        assert_eq!(kept, vec![high]);
    }

    #[test]
    fn select_best_keeps_distinct_verbal_parts() {
        let lemma = data::lemma_rules();
        let a = parse_triple("0.7: (a; has left; b)").unwrap();
        let b = parse_triple("0.9: (a; appoints; b)").unwrap();
        assert_eq!(select_best(&[a.clone(), b.clone()], lemma), vec![a, b]);
    }

    #[test]
    fn select_best_breaks_ties_by_earliest_first_argument() {
        let lemma = data::lemma_rules();
        let mut early = parse_triple("0.8: (a; has left; b)").unwrap();
        let mut late = parse_triple("0.8: (aaa; has left; c)").unwrap();
        early.arg1.span = (0, 1);
        late.arg1.span = (5, 8);
        // Equal certainty: the earlier first argument wins even when it
        // comes later in input order.
        let kept = select_best(&[late.clone(), early.clone()], lemma);
        assert_eq!(kept, vec![early]);

        // Full tie: input order decides, so the first copy stays.
        let kept = select_best(&[late.clone(), late.clone()], lemma);
        assert_eq!(kept, vec![late]);
    }

    #[test]
    fn sentence_scoping_separates_groups() {
        let lemma = data::lemma_rules();
        let mut a = parse_triple("0.7: (a; has left; b)").unwrap();
        let mut b = parse_triple("0.9: (c; has left; d)").unwrap();
        a.sentence = 0;
        b.sentence = 1;
        assert_eq!(select_best(&[a.clone(), b.clone()], lemma).len(), 2);
    }

    #[test]
    fn adapt_document_processes_the_ingested_sample() {
        let schema = data::management_change_schema();
        let blocks = parse_ingestion(data_sample()).unwrap();
        let prepared: Vec<PreparedTriple> = blocks
            .iter()
            .flat_map(|b| b.triples.iter())
            .map(|t| prepare_standalone(t, data::tag_lexicon()))
            .collect();
        let (store, results) =
            adapt_document(&prepared, &schema, &data::gazetteer(), data::lemma_rules());

        assert_eq!(results.len(), 1, "the lower-certainty triple is dropped");
        assert!(results[0].accepted);
        assert_eq!(store.len(), 3);
        let classes: Vec<(String, String)> = store
            .instances()
            .map(|(_, i)| (i.surface.clone(), i.class.clone()))
            .collect();
        assert_eq!(
            classes,
            vec![
                ("Hang Zhihua".into(), "Person".into()),
                ("non-executive directors".into(), "Position".into()),
                ("Bank".into(), "Organization".into()),
            ]
        );
    }

    fn data_sample() -> &'static str {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/data/samples/board_change.triples"
        ))
    }

    #[test]
    fn removing_gazetteer_entries_only_ever_rejects() {
        let schema = data::management_change_schema();
        let prep = prepare_native("Mark has left the president.");

        let full = recognize(&prep.tokens, &data::gazetteer());
        let mut store = InstanceStore::new();
        let with_full = adapt(&prep, &full, &schema, data::lemma_rules(), &mut store);
        assert!(with_full.accepted);

        // Without the position list the lowercase "president" mention
        // disappears and the triple falls below the entity gate.
        let sparse = recognize(&prep.tokens, &Gazetteer::new());
        assert!(sparse.len() < full.len());
        let mut store = InstanceStore::new();
        let with_sparse = adapt(&prep, &sparse, &schema, data::lemma_rules(), &mut store);
        assert!(!with_sparse.accepted);
        assert_eq!(with_sparse.reason, AdaptReason::TooFewEntities);
    }

    #[test]
    fn adapted_stores_validate_against_the_schema() {
        let schema = data::management_change_schema();
        let prepared: Vec<PreparedTriple> = [
            "QNB appoints Mark as a president",
            "Nadine the CEO has left the company.",
        ]
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut prep = prepare_native(s);
            prep.triple.sentence = i;
            prep
        })
        .collect();
        let (store, _) =
            adapt_document(&prepared, &schema, &data::gazetteer(), data::lemma_rules());
        store.validate(&schema).unwrap();
        for assertion in store.assertions() {
            assert!(schema.has_relation(&assertion.relation));
        }
    }

    #[test]
    fn dates_link_through_a_known_on_word() {
        let schema = OntologySchema::build(
            ["Person", "Organization", "Position", "Date"].map(String::from),
            [("Date_of_coming".to_string(), "Date".to_string())],
            ["appoint", "on"].map(String::from),
        )
        .unwrap();
        let triple = parse_triple("(QNB; appointed Mark on; 2020)").unwrap();
        let prep = prepare_standalone(&triple, data::tag_lexicon());
        let mentions = recognize(&prep.tokens, &data::gazetteer());
        let mut store = InstanceStore::new();
        let result = adapt(&prep, &mentions, &schema, data::lemma_rules(), &mut store);

        assert!(result.accepted);
        let rendered: Vec<(String, String, String)> = result
            .links
            .iter()
            .map(|(s, r, o)| {
                (
                    store.get(*s).unwrap().surface.clone(),
                    r.clone(),
                    store.get(*o).unwrap().surface.clone(),
                )
            })
            .collect();
        assert!(rendered.contains(&("QNB".into(), "appoint".into(), "Mark".into())));
        assert!(rendered.contains(&("QNB".into(), "on".into(), "2020".into())));
    }

    #[test]
    fn dates_stay_unlinked_without_a_known_separator() {
        // The bundled schema has no in/on relation, so the date enters the
        // store but carries no link.
        let schema = data::management_change_schema();
        let prep = prepare_native("In 2021 Meridian University appointed George Sand as provost.");
        let mentions = recognize(&prep.tokens, &data::gazetteer());
        let mut store = InstanceStore::new();
        let result = adapt(&prep, &mentions, &schema, data::lemma_rules(), &mut store);

        assert!(result.accepted);
        let date_id = store.find("2021", "Date").expect("date instance exists");
        assert!(result
            .links
            .iter()
            .all(|(s, _, o)| *s != date_id && *o != date_id));
    }

    #[test]
    fn empty_document_yields_an_empty_store() {
        let schema = data::management_change_schema();
        let (store, results) =
            adapt_document(&[], &schema, &data::gazetteer(), data::lemma_rules());
        assert!(store.is_empty());
        assert!(results.is_empty());
    }

    #[test]
    fn standalone_preparation_covers_all_parts_in_order() {
        let triple = parse_triple(
            "0.93: (Hang Zhihua; has left; non-executive directors)[attrib=Bank officials said]",
        )
        .unwrap();
        let prep = prepare_standalone(&triple, data::tag_lexicon());
        assert_eq!(prep.zones.arg1, 0..2);
        assert_eq!(prep.zones.rel, 2..4);
        assert_eq!(prep.zones.arg2, 4..6);
        assert_eq!(prep.zones.context, Some(6..9));
        assert!(prep.tokens.iter().all(|t| t.pos.is_some()));
        let mut prev = 0;
        for token in &prep.tokens {
            assert!(token.span.0 >= prev);
            prev = token.span.1;
        }
    }

    #[test]
    fn ids_run_sequentially_across_sentences() {
        let schema = data::management_change_schema();
        let mut first = parse_triple("(Omar Haddad; has left; Crescent Bank)").unwrap();
        let mut second = parse_triple("(Elena Rossi; has left; Apex Bank)").unwrap();
        first.sentence = 0;
        second.sentence = 1;
        let prepared: Vec<PreparedTriple> = [first, second]
            .iter()
            .map(|t| prepare_standalone(t, data::tag_lexicon()))
            .collect();
        let (store, results) =
            adapt_document(&prepared, &schema, &data::gazetteer(), data::lemma_rules());
        assert_eq!(results.len(), 2);
        let ids: Vec<String> = store.instances().map(|(id, _)| id.to_string()).collect();
        assert_eq!(ids, ["input1", "input2", "input3", "input4"]);
    }
}
