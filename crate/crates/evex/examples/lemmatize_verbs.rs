//! Verb-phrase lemmatization.
//!
//! Run: cargo run -p evex --example lemmatize_verbs

use evex::data;

fn main() {
    let rules = data::lemma_rules();

    let phrases = [
        "has left",
        "appoints",
        "is scheduled for",
        "was named",
        "is offering only modest greenhouse gas reduction targets at",
        "stepped down as",
        "is",
        "has",
    ];
    println!("{:<58} lemma", "phrase");
    for phrase in phrases {
        match rules.lemmatize_verb_phrase(phrase) {
            Ok(lemma) => println!("{phrase:<58} {lemma}"),
            Err(error) => println!("{phrase:<58} <{error}>"),
        }
    }

    // Every irregular-table target must lemmatize to itself.
    let violations = rules.fixpoint_check();
    println!("\nfixpoint check on the bundled irregular table: {} violation(s)", violations.len());

    let mut broken = rules.clone();
    broken.add_irregulars([("left".to_string(), "leaved".to_string())]);
    for violation in broken.fixpoint_check() {
        println!(
            "  broken table: {} -> {} relemmatizes to {}",
            violation.inflected, violation.lemma, violation.relemmatized
        );
    }
}
