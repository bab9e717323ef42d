// Reduce a two-matroid weighted problem to three matroids and check the
// optimum by exhaustive search.

use safereason::matroid::{forbidden_set_matroid, Element, ElementSet, Matroid, PartitionMatroid};
use safereason::oracle::exhaustive_optima;
use safereason::reduction::{build_reduction, extract_selection};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // Elements 0 and 1 may not both be chosen; element 2 is unconstrained.
    let forbid = forbidden_set_matroid(&ElementSet::from([Element(0), Element(1)]), 3)?;
    let sources: Vec<Box<dyn Matroid>> =
        vec![Box::new(forbid), Box::new(PartitionMatroid::free(3))];
    let inst = build_reduction(sources, &[2.0, 3.0, 1.0])?;
    println!("{} elements, lift {}", inst.ground_size(), inst.lift());

    let (best, optima) = exhaustive_optima(&inst.matroids(), inst.weights())?;
    let kept = extract_selection(&inst, &optima[0])?;
    println!("optimum {best}, originals {kept:?}");
    // k * m * c + W* with W* = 3 + 1.
    assert_eq!(best, (2 * 3) as f64 * inst.lift() + 4.0);
    assert_eq!(kept.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
