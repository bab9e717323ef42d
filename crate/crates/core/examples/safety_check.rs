// Any two of three relations are harmless; all three leak a sensitive fact.

use std::collections::BTreeSet;

use safereason::inference::Reasoner;
use safereason::ontology::{parse_ontology, parse_sensitive};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ontology = parse_ontology(include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/t123.onto"
    )))?;
    let sensitive = parse_sensitive("A isSubsetOf E")?;
    let reasoner = Reasoner::new(&ontology);

    for ids in [
        &["r1", "r2"][..],
        &["r1", "r3"],
        &["r2", "r3"],
        &["r1", "r2", "r3"],
    ] {
        let report = reasoner.is_safe(&reasoner.positions(ids)?, &sensitive)?;
        println!("{:?}: safe = {}", ids, report.is_safe());
        if let Some(w) = &report.witness {
            println!("  derives `{}` from {:?}", w.fact, ontology.ids(&w.support));
            assert_eq!(w.support, BTreeSet::from([0, 1, 2]));
        }
        assert_eq!(report.is_safe(), ids.len() == 2);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
