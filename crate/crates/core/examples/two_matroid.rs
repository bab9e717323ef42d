// Exact two-matroid intersection by shortest augmenting paths.

use safereason::matroid::parse_explicit;
use safereason::solver::{augmenting_path, intersect_two_exact};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let (ground, m1) = parse_explicit(&std::fs::read_to_string(format!(
        "{dir}/worked_m1.matroid"
    ))?)?;
    let (_, m2) = parse_explicit(&std::fs::read_to_string(format!(
        "{dir}/worked_m2.matroid"
    ))?)?;

    let seed = ground.set(&["e2", "e4"]);
    let step = augmenting_path(&m1, &m2, &seed).ok_or("no augmenting path")?;
    let path: Vec<&str> = step.path.iter().map(|&e| ground.name(e)).collect();
    println!("path from {{e2, e4}}: {}", path.join(" -> "));

    let best = intersect_two_exact(&m1, &m2)?;
    println!(
        "maximum common independent set: {:?}",
        ground.names_of(&best)
    );
    assert_eq!(best.len(), 3);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
