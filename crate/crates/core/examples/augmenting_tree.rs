// An augmenting tree where one added element opens circuits in two
// matroids and only one way of closing them succeeds.

use safereason::matroid::{GroundSet, Matroid, PartitionMatroid};
use safereason::solver::{
    apply_augmentation, build_border_graph, find_augmenting_tree, SolveParams,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroundSet::new(
        ["X", "Y", "W", "Z", "b", "a", "d", "f"]
            .map(String::from)
            .to_vec(),
    );
    let e = |n: &str| g.element(n).unwrap();
    let m1 = PartitionMatroid::new(
        8,
        [
            (vec![e("a"), e("X")], 1),
            (vec![e("d"), e("Y"), e("W")], 2),
            (vec![e("f"), e("Z")], 1),
        ],
    )?;
    let m2 = PartitionMatroid::new(8, [(vec![e("b"), e("X"), e("Y")], 2)])?;
    let m3 = PartitionMatroid::new(8, [(vec![e("b"), e("W")], 1), (vec![e("d"), e("Z")], 1)])?;
    let matroids: [&dyn Matroid; 3] = [&m1, &m2, &m3];
    let inside = g.set(&["X", "Y", "W", "Z"]);

    let graph = build_border_graph(matroids, &inside)?;
    print!("{}", graph.dump(|x| g.name(x).to_string()));
    let params = SolveParams {
        weighted: false,
        ..SolveParams::default()
    };
    let tree = find_augmenting_tree(matroids, &graph, &[1.0; 8], &params).ok_or("no tree")?;
    println!(
        "add {:?}, remove {:?}",
        g.names_of(tree.adds()),
        g.names_of(tree.removes())
    );
    let next = apply_augmentation(&inside, &tree)?;
    assert_eq!(next, g.set(&["Y", "b", "a", "d", "f"]));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
