//! End-to-end event extraction from raw sentences.
//!
//! Run: cargo run -p evex --example extract_events

use evex::pipeline::{extract_text_document, PipelineAssets};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let assets = PipelineAssets::bundled();

    let documents = [
        ("appointment", "QNB appoints Mark as a president."),
        ("departure", "Nadine the CEO has left the company."),
        (
            "two-sentence",
            "Acme Bank appointed Laura Chen as chief executive officer. Omar Haddad leaves Crescent Bank.",
        ),
    ];

    for (name, text) in documents {
        println!("=== {name}: {text:?}");
        let extraction = extract_text_document(name, text, &assets)?;
        for record in &extraction.records {
            println!("  event (d = {:.2}):", record.confidence);
            for participant in &record.participants {
                println!(
                    "    {} [{}] -> {}",
                    participant.surface,
                    participant.class,
                    participant.roles.join(", ")
                );
            }
            for (subject, relation, object) in &record.links {
                println!("    link: {subject} --{relation}--> {object}");
            }
        }
        if extraction.records.is_empty() {
            println!("  no events");
        }
        println!();
    }
    Ok(())
}
