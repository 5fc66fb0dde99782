//! Feeding pre-extracted relation triples into the pipeline.
//!
//! Triples arrive in the textual form `d: (arg1; rel; arg2)[attrib=...]`,
//! one per line; triples on consecutive lines share a sentence, and when
//! they share a verbal part only the highest certainty degree survives.
//!
//! Run: cargo run -p evex --example ingest_triples

use evex::adaptation::select_best;
use evex::data;
use evex::oie::parse_ingestion;
use evex::pipeline::{extract_ingested_document, PipelineAssets};

const TRIPLES: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/data/samples/board_change.triples"
));

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("--- input triples ---");
    let blocks = parse_ingestion(TRIPLES)?;
    for block in &blocks {
        for triple in &block.triples {
            println!(
                "  d={:.2}  ({}; {}; {})",
                triple.confidence, triple.arg1.text, triple.rel.text, triple.arg2.text
            );
        }
    }

    let all: Vec<_> = blocks.iter().flat_map(|b| b.triples.iter().cloned()).collect();
    let kept = select_best(&all, data::lemma_rules());
    println!("\n--- after certainty selection ---");
    for triple in &kept {
        println!("  kept d={:.2}: {}", triple.confidence, triple.rel.text);
    }

    let assets = PipelineAssets::bundled();
    let extraction = extract_ingested_document("board_change", TRIPLES, &assets)?;
    println!("\n--- extracted events ---");
    for record in &extraction.records {
        for participant in &record.participants {
            println!(
                "  {} [{}] -> {}",
                participant.surface,
                participant.class,
                participant.roles.join(", ")
            );
        }
        for (s, r, o) in &record.links {
            println!("  link: {s} --{r}--> {o}");
        }
    }
    Ok(())
}
