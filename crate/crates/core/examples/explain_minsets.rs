// Every minimal set of relations deriving each sensitive fact.

use safereason::inference::{combined_minsets, minimal_support_sets, DEFAULT_SUPPORT_CAP};
use safereason::ontology::{parse_ontology, parse_sensitive};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let ontology = parse_ontology(&std::fs::read_to_string(format!("{dir}/trap.onto"))?)?;
    let sensitive = parse_sensitive(&std::fs::read_to_string(format!("{dir}/trap.sensitive"))?)?;

    let per_fact = minimal_support_sets(&ontology, &sensitive, DEFAULT_SUPPORT_CAP)?;
    for (fact, family) in &per_fact {
        println!("{fact}");
        for set in family.sets() {
            println!("  {:?}", ontology.ids(set));
        }
    }
    let all = combined_minsets(&per_fact);
    print!("{}", all.to_text(&ontology));
    assert_eq!(all.len(), 2);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
