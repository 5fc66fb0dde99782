//! Scoring the bundled mini-corpus against its gold annotations.
//!
//! Run: cargo run -p evex --example evaluate_corpus

use std::path::PathBuf;

use evex::eval::{score, GoldAnnotations};
use evex::pipeline::{extract_text_document, prediction_pairs, PipelineAssets};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/mini_corpus");
    let assets = PipelineAssets::bundled();

    let mut records = Vec::new();
    for index in 1..=10 {
        let document = format!("f{index:02}");
        let text = std::fs::read_to_string(corpus.join(format!("{document}.txt")))?;
        records.extend(extract_text_document(&document, &text, &assets)?.records);
    }

    let gold = GoldAnnotations::parse(&std::fs::read_to_string(corpus.join("gold.tsv"))?)?;
    let roles: Vec<String> = assets.schema.roles().map(|(r, _)| r.to_string()).collect();
    let report = score(&prediction_pairs(&records), &gold, &roles);

    print!("{}", report.render_text(0));
    println!("\nCSV form:\n{}", report.render_csv());
    Ok(())
}
