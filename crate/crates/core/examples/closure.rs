// Derive every fact of a small part-of hierarchy, two ways.

use safereason::inference::{reachability_closure, Reasoner};
use safereason::ontology::parse_ontology;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let text = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/chain.onto"));
    let ontology = parse_ontology(text)?;
    let facts = Reasoner::new(&ontology).full_closure();
    for fact in &facts {
        println!("{fact}");
    }
    assert_eq!(facts.len(), 6);
    assert_eq!(reachability_closure(&ontology)?, facts);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
