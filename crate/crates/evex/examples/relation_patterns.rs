//! The native relation extractor: tagging, verb patterns, and the
//! lexical filter.
//!
//! Relation phrases are a verb group, optionally followed by intervening
//! words and a final preposition; per verb, the longest match wins. The
//! lexical filter then drops relations whose normalized form is too rare.
//!
//! Run: cargo run -p evex --example relation_patterns

use evex::data;
use evex::oie::{extract_triples, lexical_filter, pos_tag, tokenize, RelationFrequencyTable};

fn main() {
    let sentences = [
        "QNB appoints Mark as a president.",
        "Nadine the CEO has left the company.",
        "The Obama administration is offering only modest greenhouse gas reduction targets at the conference.",
    ];

    for sentence in sentences {
        println!("=== {sentence}");
        let tokens = pos_tag(tokenize(sentence), data::tag_lexicon());
        let tagged: Vec<String> = tokens
            .iter()
            .map(|t| format!("{}/{:?}", t.text, t.pos.unwrap()))
            .collect();
        println!("  tags: {}", tagged.join(" "));
        for triple in extract_triples(sentence, &tokens) {
            println!(
                "  d={:.2}  ({}; {}; {})",
                triple.confidence, triple.arg1.text, triple.rel.text, triple.arg2.text
            );
        }
        println!();
    }

    // A frequency table drops syntactically valid but useless relations.
    let sentence = "The Obama administration is offering only modest greenhouse gas \
                    reduction targets at the conference.";
    let tokens = pos_tag(tokenize(sentence), data::tag_lexicon());
    let triples = extract_triples(sentence, &tokens);
    let key = data::lemma_rules()
        .lemmatize_verb_phrase(&triples[0].rel.text)
        .unwrap();
    println!("normalized relation: {key:?}");
    let table = RelationFrequencyTable::new([(key, 19)], 20);
    let kept = lexical_filter(triples, Some(&table), data::lemma_rules());
    println!("kept after lexical filter (count 19 < threshold 20): {}", kept.len());
}
