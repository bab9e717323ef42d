// Heaviest-first selection keeps the single heavy relation; the exact and
// augmenting methods keep the two lighter ones instead.

use safereason::ontology::{parse_minsets, parse_ontology};
use safereason::solver::{sanitize, Method, SolveParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let ontology = parse_ontology(&std::fs::read_to_string(format!("{dir}/trap.onto"))?)?;
    let minsets = parse_minsets(
        &std::fs::read_to_string(format!("{dir}/trap.minsets"))?,
        &ontology,
    )?;

    for (method, expected) in [
        (Method::Greedy, 5.0),
        (Method::Augment, 8.0),
        (Method::Oracle, 8.0),
    ] {
        let result = sanitize(&ontology, &minsets, method, &SolveParams::default())?;
        println!(
            "{method}: keep {:?} weight {} optimal {}",
            ontology.ids(&result.kept),
            result.weight,
            result.optimal
        );
        assert_eq!(result.weight, expected);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
