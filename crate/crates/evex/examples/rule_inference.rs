//! Forward-chaining role inference over a hand-built instance store.
//!
//! Run: cargo run -p evex --example rule_inference

use evex::data;
use evex::ontology::InstanceStore;
use evex::rules::infer_with_trace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let schema = data::management_change_schema();
    let rules = data::management_change_rules();

    // The store an adapted appointment sentence produces.
    let mut store = InstanceStore::new();
    let qnb = store.add_instance(&schema, "QNB", "Organization")?;
    let mark = store.add_instance(&schema, "Mark", "Person")?;
    let president = store.add_instance(&schema, "president", "Position")?;
    store.link_instances(&schema, qnb, "appoint", mark)?;
    store.link_instances(&schema, mark, "as", president)?;

    println!("--- store before inference ---");
    print!("{}", store.to_snapshot_json());

    let result = infer_with_trace(&schema, &store, &rules)?;
    println!("\n--- store after inference ({} passes) ---", result.passes);
    print!("{}", result.store.to_snapshot_json());

    println!("\n--- derivations ---");
    for (id, instance) in result.store.instances() {
        for role in &instance.roles {
            for chain in result.explain(id, role)? {
                println!("  {} gets {role} via {}", instance.surface, chain.join(" -> "));
            }
        }
    }
    Ok(())
}
