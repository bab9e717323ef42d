use super::border::{build_border_graph, BorderGraph};
use super::tree::{apply_augmentation, find_augmenting_tree};
use super::{SolveParams, SolverError};
use crate::matroid::{Element, ElementSet, Matroid};
use crate::reduction::ReducedInstance;

#[derive(Debug, Clone)]
pub struct ThreeSolution {
    pub selection: ElementSet,
    pub augmentations: usize,
    /// Border graph of the final selection, where the search stopped.
    pub final_graph: BorderGraph,
}

/// Greedy seed by weight descending then index, followed by augmenting
/// trees until none is found.
pub fn solve_three_matroids(
    matroids: [&dyn Matroid; 3],
    weights: &[f64],
    params: &SolveParams,
) -> Result<ThreeSolution, SolverError> {
    let n = matroids[0].ground_size();
    for m in &matroids[1..] {
        if m.ground_size() != n {
            return Err(SolverError::GroundMismatch(n, m.ground_size()));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut selection = ElementSet::new();
    for e in order.into_iter().map(Element) {
        if matroids.iter().all(|m| m.can_add(&selection, e)) {
            selection.insert(e);
        }
    }

    let mut augmentations = 0;
    loop {
        let graph = build_border_graph(matroids, &selection)?;
        let Some(tree) = find_augmenting_tree(matroids, &graph, weights, params) else {
            return Ok(ThreeSolution {
                selection,
                augmentations,
                final_graph: graph,
            });
        };
        selection = apply_augmentation(&selection, &tree)?;
        augmentations += 1;
    }
}

pub fn solve_three(
    inst: &ReducedInstance,
    params: &SolveParams,
) -> Result<ThreeSolution, SolverError> {
    solve_three_matroids(inst.matroids(), inst.weights(), params)
}
