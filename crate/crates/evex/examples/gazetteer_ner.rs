//! Gazetteer-based named-entity recognition.
//!
//! Three passes: longest-window gazetteer lookup, date patterns, then
//! shape runs of capitalized unknown tokens (all-caps or a corporate
//! suffix means ORGANIZATION, short runs mean PERSON).
//!
//! Run: cargo run -p evex --example gazetteer_ner

use evex::data;
use evex::ner::{recognize, EntityType, Gazetteer};
use evex::oie::{pos_tag, tokenize};

fn main() {
    let gazetteer = data::gazetteer();
    let sentences = [
        "QNB appoints Mark as a president.",
        "Hang Zhihua has left Union Bank.",
        "Meridian University appointed George Sand as provost on March 15, 2021.",
        "The chief executive officer met Maria Garcia in Paris.",
    ];
    for sentence in sentences {
        println!("=== {sentence}");
        let tokens = pos_tag(tokenize(sentence), data::tag_lexicon());
        for mention in recognize(&tokens, &gazetteer) {
            println!(
                "  {:<28} {:<13} via {:?}",
                mention.surface,
                mention.entity_type.to_string(),
                mention.source
            );
        }
        println!();
    }

    // Priority settles surfaces listed under several types.
    let mut ambiguous = Gazetteer::new();
    ambiguous.add(EntityType::Person, "Jordan");
    ambiguous.add(EntityType::Location, "Jordan");
    let tokens = pos_tag(tokenize("Jordan spoke"), data::tag_lexicon());
    let default_pick = recognize(&tokens, &ambiguous)[0].entity_type;
    let flipped = ambiguous.with_priority(vec![EntityType::Location, EntityType::Person]);
    let flipped_pick = recognize(&tokens, &flipped)[0].entity_type;
    println!("\"Jordan\" resolves to {default_pick} by default, {flipped_pick} with LOCATION first");
}
