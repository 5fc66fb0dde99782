//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::collections::BTreeSet;
use std::panic::UnwindSafe;
use std::path::PathBuf;
use std::sync::LazyLock;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evex::adaptation::{prepare_standalone, select_best};
use evex::data;
use evex::eval::{f_measure, precision, recall};
use evex::ner::recognize;
use evex::oie::{
    extract_triples, format_triple, lexical_filter, parse_triple, pos_tag, tokenize,
    RelationFrequencyTable, TripleExtraction,
};
use evex::ontology::{InstanceId, InstanceStore, OntologySchema};
use evex::pipeline::{
    extract_ingested_document, extract_text_document, run_eval, run_extract, EventRecord,
    OutputFormat, PipelineAssets, RunConfig,
};
use evex::rules::{infer_with_trace, Atom, Fact, Rule, Term};

static SCHEMA: LazyLock<OntologySchema> = LazyLock::new(data::management_change_schema);

fn criterion(number: u32, description: &str, body: impl FnOnce() + UnwindSafe) {
    let outcome = std::panic::catch_unwind(body);
    match &outcome {
        Ok(()) => println!("criterion {number}: PASS - {description}"),
        Err(_) => println!("criterion {number}: FAIL - {description}"),
    }
    if let Err(panic) = outcome {
        std::panic::resume_unwind(panic);
    }
}

fn data_path(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(relative)
}

fn role_pairs(records: &[EventRecord]) -> BTreeSet<(String, String)> {
    records
        .iter()
        .flat_map(|r| r.participants.iter())
        .flat_map(|p| p.roles.iter().map(|role| (p.surface.clone(), role.clone())))
        .collect()
}

fn pairs(expected: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    expected
        .iter()
        .map(|(s, r)| (s.to_string(), r.to_string()))
        .collect()
}

fn mini_corpus_config(output: PathBuf) -> RunConfig {
    let inputs = (1..=10)
        .map(|i| data_path(&format!("data/mini_corpus/f{i:02}.txt")))
        .collect();
    RunConfig {
        schema: data_path("data/management_change.schema"),
        rules: data_path("data/management_change.rules"),
        gazetteers: data_path("data/gazetteers"),
        inputs,
        triples: None,
        output,
        format: OutputFormat::Json,
        trace_adaptation: false,
        lexical_filter: None,
        threshold: 1,
        ner_priority: None,
    }
}

#[test]
fn c1_golden_phrase_one() {
    criterion(1, "appointment sentence yields exact roles and links", || {
        let assets = PipelineAssets::bundled();
        let started = Instant::now();
        let out =
            extract_text_document("doc", "QNB appoints Mark as a president.", &assets).unwrap();
        let elapsed = started.elapsed();

        assert_eq!(
            role_pairs(&out.records),
            pairs(&[
                ("QNB", "IN_ORG"),
                ("Mark", "Coming_person"),
                ("president", "CP_new_position"),
            ]),
        );
        let links: BTreeSet<(String, String, String)> = out
            .records
            .iter()
            .flat_map(|r| r.links.iter().cloned())
            .collect();
        let expected: BTreeSet<(String, String, String)> = [
            ("QNB", "appoint", "Mark"),
            ("Mark", "as", "president"),
        ]
        .iter()
        .map(|(s, r, o)| (s.to_string(), r.to_string(), o.to_string()))
        .collect();
        assert_eq!(links, expected);
        assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    });
}

#[test]
fn c2_golden_phrase_two() {
    criterion(2, "departure sentence yields roles via lemma \"leave\"", || {
        let assets = PipelineAssets::bundled();
        let out =
            extract_text_document("doc", "Nadine the CEO has left the company.", &assets).unwrap();
        assert_eq!(
            role_pairs(&out.records),
            pairs(&[("Nadine", "Leaving_person"), ("CEO", "LP_previous_position")]),
        );
        // The link relation is the lemma, not the inflected phrase.
        assert_eq!(
            out.records[0].links,
            vec![("Nadine".to_string(), "leave".to_string(), "CEO".to_string())]
        );
    });
}

#[test]
fn c3_golden_phrase_three_ingested() {
    criterion(3, "ingested triples select the higher certainty and yield exact roles", || {
        let assets = PipelineAssets::bundled();
        let text = std::fs::read_to_string(data_path("data/samples/board_change.triples")).unwrap();

        // The two triples share a verbal part; selection keeps d = 0.93.
        let blocks = evex::oie::parse_ingestion(&text).unwrap();
        let all: Vec<TripleExtraction> =
            blocks.iter().flat_map(|b| b.triples.iter().cloned()).collect();
        assert_eq!(all.len(), 2);
        let kept = select_best(&all, data::lemma_rules());
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].confidence, 0.93);

        let out = extract_ingested_document("doc", &text, &assets).unwrap();
        assert_eq!(
            role_pairs(&out.records),
            pairs(&[
                ("Hang Zhihua", "Leaving_person"),
                ("non-executive directors", "LP_previous_position"),
                ("Bank", "OUT_ORG"),
            ]),
        );
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].confidence, 0.93);
    });
}

#[test]
fn c4_relation_pattern_fidelity() {
    criterion(4, "long relation phrase matches exactly and the lexical filter drops it", || {
        let sentence = "The Obama administration is offering only modest greenhouse gas \
                        reduction targets at the conference.";
        let tokens = pos_tag(tokenize(sentence), data::tag_lexicon());
        let triples = extract_triples(sentence, &tokens);
        assert_eq!(triples.len(), 1);
        assert_eq!(
            triples[0].rel.text,
            "is offering only modest greenhouse gas reduction targets at"
        );

        let key = data::lemma_rules()
            .lemmatize_verb_phrase(&triples[0].rel.text)
            .unwrap();
        let table = RelationFrequencyTable::new([(key, 19)], 20);
        let kept = lexical_filter(triples, Some(&table), data::lemma_rules());
        assert!(kept.is_empty(), "count 19 is below the threshold of 20");
    });
}

// ---------------------------------------------------------------------------
// Randomized stores and rules over the bundled schema.

fn random_store(rng: &mut ChaCha8Rng) -> InstanceStore {
    let schema = &*SCHEMA;
    let classes: Vec<String> = schema.classes().map(str::to_string).collect();
    let roles: Vec<(String, String)> = schema
        .roles()
        .map(|(r, p)| (r.to_string(), p.to_string()))
        .collect();
    let relations: Vec<String> = schema.relations().map(str::to_string).collect();

    let mut store = InstanceStore::new();
    let count = rng.random_range(1..=5);
    let mut ids = Vec::new();
    for i in 0..count {
        let class = &classes[rng.random_range(0..classes.len())];
        let id = store.add_instance(schema, &format!("s{i}"), class).unwrap();
        ids.push(id);
        if rng.random_range(0..10) < 3 {
            let candidates: Vec<&String> =
                roles.iter().filter(|(_, p)| p == class).map(|(r, _)| r).collect();
            if !candidates.is_empty() {
                let role = candidates[rng.random_range(0..candidates.len())];
                store.assign_role(schema, id, role).unwrap();
            }
        }
    }
    for _ in 0..rng.random_range(0..=6) {
        let subject = ids[rng.random_range(0..ids.len())];
        let object = ids[rng.random_range(0..ids.len())];
        let relation = &relations[rng.random_range(0..relations.len())];
        store.link_instances(schema, subject, relation, object).unwrap();
    }
    store
}

fn random_rules(rng: &mut ChaCha8Rng) -> Vec<Rule> {
    let schema = &*SCHEMA;
    let classes: Vec<String> = schema.classes().map(str::to_string).collect();
    let roles: Vec<String> = schema.roles().map(|(r, _)| r.to_string()).collect();
    let relations: Vec<String> = schema.relations().map(str::to_string).collect();
    let vars = ["x", "y", "z"];

    let mut rules = Vec::new();
    for index in 0..rng.random_range(1..=4) {
        let mut body = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let atom = match rng.random_range(0..3) {
                0 => Atom::unary(
                    classes[rng.random_range(0..classes.len())].clone(),
                    Term::Variable(vars[rng.random_range(0..vars.len())].to_string()),
                ),
                1 => Atom::unary(
                    roles[rng.random_range(0..roles.len())].clone(),
                    Term::Variable(vars[rng.random_range(0..vars.len())].to_string()),
                ),
                _ => Atom::binary(
                    relations[rng.random_range(0..relations.len())].clone(),
                    Term::Variable(vars[rng.random_range(0..vars.len())].to_string()),
                    Term::Variable(vars[rng.random_range(0..vars.len())].to_string()),
                ),
            };
            body.push(atom);
        }
        let bound: Vec<String> = body
            .iter()
            .flat_map(Atom::variables)
            .map(str::to_string)
            .collect();
        let mut head = Vec::new();
        for _ in 0..rng.random_range(1..=2) {
            let predicate = if rng.random_range(0..2) == 0 {
                classes[rng.random_range(0..classes.len())].clone()
            } else {
                roles[rng.random_range(0..roles.len())].clone()
            };
            let variable = bound[rng.random_range(0..bound.len())].clone();
            head.push(Atom::unary(predicate, Term::Variable(variable)));
        }
        rules.push(Rule {
            id: format!("r{index}"),
            body,
            head,
        });
    }
    rules
}

/// Naive repeat-until-stable enumeration of every ground substitution.
/// Independent of the engine: no indexes, no bindings, just the finite
/// ground-atom universe.
fn oracle_fixpoint(schema: &OntologySchema, store: &InstanceStore, rules: &[Rule]) -> BTreeSet<Fact> {
    let mut facts: BTreeSet<Fact> = BTreeSet::new();
    let mut declared: Vec<(InstanceId, String)> = Vec::new();
    for (id, instance) in store.instances() {
        facts.insert(Fact::Class(id, instance.class.clone()));
        declared.push((id, instance.class.clone()));
        for role in &instance.roles {
            facts.insert(Fact::Role(id, role.clone()));
        }
    }
    for assertion in store.assertions() {
        facts.insert(Fact::Relation(
            assertion.subject,
            assertion.relation.clone(),
            assertion.object,
        ));
    }
    let ids: Vec<InstanceId> = declared.iter().map(|(id, _)| *id).collect();

    let kind_of = |name: &str| -> u8 {
        if schema.role_parent(name).is_some() {
            1
        } else if schema.has_class(name) {
            0
        } else {
            2
        }
    };

    loop {
        let mut added = false;
        for rule in rules {
            let mut vars: Vec<String> = Vec::new();
            for atom in rule.body.iter().chain(rule.head.iter()) {
                for v in atom.variables() {
                    if !vars.iter().any(|x| x == v) {
                        vars.push(v.to_string());
                    }
                }
            }
            if ids.is_empty() && !vars.is_empty() {
                continue;
            }
            let mut odometer = vec![0usize; vars.len()];
            loop {
                let lookup = |term: &Term| -> InstanceId {
                    match term {
                        Term::Variable(v) => {
                            ids[odometer[vars.iter().position(|x| x == v).unwrap()]]
                        }
                        Term::Constant(_) => unreachable!("generators emit variables only"),
                    }
                };
                let satisfied = rule.body.iter().all(|atom| match kind_of(&atom.predicate) {
                    0 => facts.contains(&Fact::Class(lookup(&atom.args[0]), atom.predicate.clone())),
                    1 => facts.contains(&Fact::Role(lookup(&atom.args[0]), atom.predicate.clone())),
                    _ => facts.contains(&Fact::Relation(
                        lookup(&atom.args[0]),
                        atom.predicate.to_lowercase(),
                        lookup(&atom.args[1]),
                    )),
                });
                if satisfied {
                    for atom in &rule.head {
                        let id = lookup(&atom.args[0]);
                        let fact = match kind_of(&atom.predicate) {
                            0 => Some(Fact::Class(id, atom.predicate.clone())),
                            1 => {
                                let parent = schema.role_parent(&atom.predicate);
                                let class = &declared
                                    .iter()
                                    .find(|(i, _)| *i == id)
                                    .expect("declared instance")
                                    .1;
                                if parent == Some(class.as_str()) {
                                    Some(Fact::Role(id, atom.predicate.clone()))
                                } else {
                                    None
                                }
                            }
                            _ => None,
                        };
                        if let Some(fact) = fact {
                            if facts.insert(fact) {
                                added = true;
                            }
                        }
                    }
                }
                // Advance the odometer.
                let mut position = 0;
                loop {
                    if position == odometer.len() {
                        break;
                    }
                    odometer[position] += 1;
                    if odometer[position] < ids.len() {
                        break;
                    }
                    odometer[position] = 0;
                    position += 1;
                }
                if position == odometer.len() {
                    break;
                }
            }
        }
        if !added {
            break;
        }
    }
    facts
}

#[test]
fn c5_engine_matches_the_brute_force_oracle() {
    criterion(5, "200 randomized stores agree with the substitution-enumeration oracle", || {
        let schema = &*SCHEMA;
        let mut rng = ChaCha8Rng::seed_from_u64(0xEE57);
        let started = Instant::now();
        for case in 0..200 {
            let store = random_store(&mut rng);
            let rules = random_rules(&mut rng);
            let result = infer_with_trace(schema, &store, &rules).unwrap();
            let expected = oracle_fixpoint(schema, &store, &rules);
            assert_eq!(
                result.facts(),
                expected,
                "case {case} diverged: store {store:?}, rules {rules:?}"
            );
            assert!(
                result.passes <= result.derived_facts().len() + 1,
                "case {case}: {} passes for {} derived facts",
                result.passes,
                result.derived_facts().len()
            );
        }
        let elapsed = started.elapsed();
        assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    });
}

// ---------------------------------------------------------------------------
// Property tests for the algebraic laws of the engine.

fn case_strategy() -> impl Strategy<Value = (InstanceStore, Vec<Rule>)> {
    let instances = prop::collection::vec((0usize..4, prop::option::of(0usize..16)), 1..=5);
    let links = prop::collection::vec((0usize..5, 0usize..3, 0usize..5), 0..=6);
    let body_atom = (0usize..3, 0usize..16, 0usize..3, 0usize..3);
    let head_atom = (0usize..2, 0usize..16, 0usize..8);
    let rule = (
        prop::collection::vec(body_atom, 1..=3),
        prop::collection::vec(head_atom, 1..=2),
    );
    let rules = prop::collection::vec(rule, 1..=4);
    (instances, links, rules).prop_map(|(instances, links, rules)| build_case(instances, links, rules))
}

#[allow(clippy::type_complexity)]
fn build_case(
    instances: Vec<(usize, Option<usize>)>,
    links: Vec<(usize, usize, usize)>,
    rules: Vec<(Vec<(usize, usize, usize, usize)>, Vec<(usize, usize, usize)>)>,
) -> (InstanceStore, Vec<Rule>) {
    let schema = &*SCHEMA;
    let classes: Vec<String> = schema.classes().map(str::to_string).collect();
    let roles: Vec<(String, String)> = schema
        .roles()
        .map(|(r, p)| (r.to_string(), p.to_string()))
        .collect();
    let relations: Vec<String> = schema.relations().map(str::to_string).collect();
    let vars = ["x", "y", "z"];

    let mut store = InstanceStore::new();
    let mut ids = Vec::new();
    for (i, (class_pick, role_pick)) in instances.iter().enumerate() {
        let class = &classes[class_pick % classes.len()];
        let id = store.add_instance(schema, &format!("s{i}"), class).unwrap();
        ids.push(id);
        if let Some(pick) = role_pick {
            let candidates: Vec<&String> =
                roles.iter().filter(|(_, p)| p == class).map(|(r, _)| r).collect();
            if !candidates.is_empty() {
                store
                    .assign_role(schema, id, candidates[pick % candidates.len()])
                    .unwrap();
            }
        }
    }
    for (s, r, o) in links {
        let subject = ids[s % ids.len()];
        let object = ids[o % ids.len()];
        store
            .link_instances(schema, subject, &relations[r % relations.len()], object)
            .unwrap();
    }

    let mut built = Vec::new();
    for (index, (body_specs, head_specs)) in rules.iter().enumerate() {
        let mut body = Vec::new();
        for (kind, pred, v1, v2) in body_specs {
            let atom = match kind % 3 {
                0 => Atom::unary(
                    classes[pred % classes.len()].clone(),
                    Term::Variable(vars[v1 % 3].to_string()),
                ),
                1 => Atom::unary(
                    roles[pred % roles.len()].0.clone(),
                    Term::Variable(vars[v1 % 3].to_string()),
                ),
                _ => Atom::binary(
                    relations[pred % relations.len()].clone(),
                    Term::Variable(vars[v1 % 3].to_string()),
                    Term::Variable(vars[v2 % 3].to_string()),
                ),
            };
            body.push(atom);
        }
        let bound: Vec<String> = body
            .iter()
            .flat_map(Atom::variables)
            .map(str::to_string)
            .collect();
        let mut head = Vec::new();
        for (kind, pred, var_pick) in head_specs {
            let predicate = if kind % 2 == 0 {
                classes[pred % classes.len()].clone()
            } else {
                roles[pred % roles.len()].0.clone()
            };
            head.push(Atom::unary(
                predicate,
                Term::Variable(bound[var_pick % bound.len()].clone()),
            ));
        }
        built.push(Rule {
            id: format!("r{index}"),
            body,
            head,
        });
    }
    (store, built)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    })
}

#[test]
fn c6_engine_algebraic_properties() {
    criterion(6, "monotonicity, idempotence, and rule-order invariance (1050 cases)", || {
        let schema = &*SCHEMA;

        // Monotonicity: input facts are preserved, nothing but roles is added.
        runner(350)
            .run(&case_strategy(), |(store, rules)| {
                let after = evex::rules::infer(schema, &store, &rules).unwrap();
                prop_assert_eq!(after.len(), store.len());
                prop_assert_eq!(after.assertions(), store.assertions());
                for (id, before) in store.instances() {
                    let now = after.get(id).unwrap();
                    prop_assert_eq!(&now.surface, &before.surface);
                    prop_assert_eq!(&now.class, &before.class);
                    prop_assert!(before.roles.is_subset(&now.roles));
                }
                Ok(())
            })
            .unwrap();

        // Idempotence: a fixpoint stays fixed.
        runner(350)
            .run(&case_strategy(), |(store, rules)| {
                let once = evex::rules::infer(schema, &store, &rules).unwrap();
                let twice = evex::rules::infer(schema, &once, &rules).unwrap();
                prop_assert_eq!(&twice, &once);
                Ok(())
            })
            .unwrap();

        // Rule-order invariance: permutations reach the same fixpoint.
        runner(350)
            .run(&case_strategy(), |(store, rules)| {
                let forward = evex::rules::infer(schema, &store, &rules).unwrap();
                let mut reversed = rules.clone();
                reversed.reverse();
                prop_assert_eq!(&evex::rules::infer(schema, &store, &reversed).unwrap(), &forward);
                let mut rotated = rules.clone();
                rotated.rotate_left(rules.len() / 2);
                prop_assert_eq!(&evex::rules::infer(schema, &store, &rotated).unwrap(), &forward);
                Ok(())
            })
            .unwrap();
    });
}

#[test]
fn c7_metric_arithmetic_and_mini_corpus_scores() {
    criterion(7, "F-measure arithmetic matches reported rows; mini-corpus P>=90%, R>=80%", || {
        // (precision %, recall %, reported F %): computing F from the stated
        // P and R must land within 1.5 points of the printed value.
        let rows: [(f64, f64, f64); 6] = [
            (100.0, 85.0, 91.0),
            (100.0, 88.0, 93.0),
            (100.0, 66.0, 80.0),
            (100.0, 85.0, 91.0),
            (100.0, 80.0, 88.0),
            (100.0, 100.0, 100.0),
        ];
        for (p, r, printed) in rows {
            let computed = 2.0 * p * r / (p + r);
            assert!(
                (computed - printed).abs() <= 1.5,
                "F({p}, {r}) = {computed}, printed {printed}"
            );
        }

        let dir = tempfile::tempdir().unwrap();
        let output = dir.path().join("pred.jsonl");
        let config = mini_corpus_config(output.clone());
        run_extract(&config).unwrap();
        let report = run_eval(
            &output,
            &data_path("data/mini_corpus/gold.tsv"),
            None,
            Some(&config.schema),
        )
        .unwrap();
        let p = precision(&report.total);
        let r = recall(&report.total);
        let f = f_measure(&report.total);
        assert!(p >= 0.90, "precision {p}");
        assert!(r >= 0.80, "recall {r}");
        assert!(f > 0.0);
    });
}

#[test]
fn c8_round_trip_properties() {
    criterion(8, "triple/schema round trips, lemmatizer idempotence, NER non-overlap", || {
        let assets = PipelineAssets::bundled();

        // Triple format/parse identity on extracted and file fixtures.
        let mut fixtures: Vec<TripleExtraction> = Vec::new();
        for i in 1..=10 {
            let text =
                std::fs::read_to_string(data_path(&format!("data/mini_corpus/f{i:02}.txt"))).unwrap();
            for sentence in evex::oie::split_sentences(&text, data::abbreviations()) {
                let tokens = pos_tag(tokenize(sentence.text), data::tag_lexicon());
                fixtures.extend(extract_triples(sentence.text, &tokens));
            }
        }
        let samples =
            std::fs::read_to_string(data_path("data/samples/board_change.triples")).unwrap();
        for block in evex::oie::parse_ingestion(&samples).unwrap() {
            fixtures.extend(block.triples);
        }
        fixtures.push(
            parse_triple("(Barack Obama; was not born in; the United States)[attrib=Some people say]")
                .unwrap(),
        );
        assert!(fixtures.len() >= 12);
        for triple in &fixtures {
            let rendered = format_triple(triple);
            let reparsed = parse_triple(&rendered).unwrap();
            assert_eq!(format_triple(&reparsed), rendered);
            assert_eq!(reparsed.arg1.text, triple.arg1.text);
            assert_eq!(reparsed.rel.text, triple.rel.text);
            assert_eq!(reparsed.arg2.text, triple.arg2.text);
            assert_eq!(reparsed.confidence, triple.confidence);
            assert_eq!(reparsed.context, triple.context);
        }

        // Randomized triples keep the identity too.
        let text = || proptest::string::string_regex("[a-z][a-z ]{0,10}[a-z]|[a-z]").unwrap();
        runner(300)
            .run(
                &(
                    text(),
                    text(),
                    text(),
                    0u32..=100,
                    prop::option::of(prop::bool::ANY),
                ),
                |(a1, rel, a2, conf, ctx)| {
                    let mut triple = TripleExtraction::from_texts(&a1, &rel, &a2)
                        .with_confidence(f64::from(conf) / 100.0);
                    if let Some(attrib) = ctx {
                        let kind = if attrib {
                            evex::oie::ContextKind::Attribution
                        } else {
                            evex::oie::ContextKind::Condition
                        };
                        triple = triple.with_context(kind, "some context");
                    }
                    let rendered = format_triple(&triple);
                    let reparsed = parse_triple(&rendered).unwrap();
                    prop_assert_eq!(format_triple(&reparsed), rendered);
                    Ok(())
                },
            )
            .unwrap();

        // Schema save/load identity, in memory and through a file.
        let schema = &*SCHEMA;
        assert_eq!(&OntologySchema::parse(&schema.to_text()).unwrap(), schema);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("schema.txt");
        schema.save(&path).unwrap();
        assert_eq!(&OntologySchema::load(&path).unwrap(), schema);

        // Store snapshot identity through a file.
        let out = extract_text_document("doc", "QNB appoints Mark as a president.", &assets).unwrap();
        let store_path = dir.path().join("store.json");
        out.store().save(&store_path).unwrap();
        let loaded = InstanceStore::load(&store_path, schema).unwrap();
        assert_eq!(&loaded, out.store());

        // Lemmatizer idempotence over a 100-phrase list.
        let verbs = [
            "appoint", "leave", "offer", "schedule", "announce", "name", "promote", "elect",
            "hire", "join", "resign", "retire", "replace", "succeed", "confirm", "report",
            "say", "take", "give", "hold", "run", "move", "step", "plan", "manage",
        ];
        let shapes = [
            |v: &str| format!("has {v}ed"),
            |v: &str| format!("{v}s"),
            |v: &str| format!("is {v}ing at"),
            |v: &str| format!("was {v}ed as"),
        ];
        let mut phrases = Vec::new();
        for verb in verbs {
            for shape in &shapes {
                phrases.push(shape(verb));
            }
        }
        assert_eq!(phrases.len(), 100);
        let lemma = data::lemma_rules();
        for phrase in &phrases {
            let once = lemma.lemmatize_verb_phrase(phrase).unwrap();
            let again = lemma.lemmatize_verb_phrase(&once).unwrap();
            assert_eq!(again, once, "not idempotent on {phrase:?}");
        }

        // NER mentions never overlap on the corpus fixtures.
        let mut sentences: Vec<String> = Vec::new();
        for i in 1..=10 {
            let text =
                std::fs::read_to_string(data_path(&format!("data/mini_corpus/f{i:02}.txt"))).unwrap();
            sentences.extend(
                evex::oie::split_sentences(&text, data::abbreviations())
                    .iter()
                    .map(|s| s.text.to_string()),
            );
        }
        sentences.push(
            "The Obama administration is offering only modest greenhouse gas reduction targets \
             at the conference."
                .to_string(),
        );
        for block in evex::oie::parse_ingestion(&samples).unwrap() {
            for triple in &block.triples {
                let prep = prepare_standalone(triple, data::tag_lexicon());
                check_non_overlap(&recognize(&prep.tokens, &assets.gazetteer));
            }
        }
        for sentence in &sentences {
            let tokens = pos_tag(tokenize(sentence), data::tag_lexicon());
            check_non_overlap(&recognize(&tokens, &assets.gazetteer));
        }
    });
}

fn check_non_overlap(mentions: &[evex::ner::EntityMention]) {
    let mut previous_end = 0;
    for mention in mentions {
        assert!(
            mention.span.0 >= previous_end,
            "overlapping mention {mention:?}"
        );
        assert!(mention.span.1 > mention.span.0);
        previous_end = mention.span.1;
    }
}

#[test]
fn c9_extraction_is_deterministic() {
    criterion(9, "two extract runs over the mini-corpus are byte-identical", || {
        let dir = tempfile::tempdir().unwrap();
        let first = dir.path().join("first.jsonl");
        let second = dir.path().join("second.jsonl");
        run_extract(&mini_corpus_config(first.clone())).unwrap();
        run_extract(&mini_corpus_config(second.clone())).unwrap();
        let a = std::fs::read(&first).unwrap();
        let b = std::fs::read(&second).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
    });
}
