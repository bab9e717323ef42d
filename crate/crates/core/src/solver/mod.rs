//! Matroid intersection solvers and ontology sanitization.
//!
//! Two matroids are handled exactly by shortest augmenting paths. Three
//! matroids use augmenting trees over a border graph, searched with
//! dominance pruning; this is exact only in exhaustive mode and otherwise a
//! heuristic. [`sanitize`] drives either solver from a minimal-support-set
//! family.

mod border;
mod sanitize;
mod three;
mod tree;
mod two;

use thiserror::Error;

use crate::matroid::{Element, MatroidError};
use crate::oracle::OracleError;
use crate::reduction::ReductionError;

pub use border::{build_border_graph, BorderEdge, BorderGraph};
pub use sanitize::{sanitize, sanitize_traced, sanitize_weights, Method, SanitizeResult};
pub use three::{solve_three, solve_three_matroids, ThreeSolution};
pub use tree::{apply_augmentation, find_augmenting_tree, AugmentingTree, Label};
pub use two::{augmenting_path, intersect_two_exact, intersect_two_from, PathAugmentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("matroid ground sets differ ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("starting set is not independent in every matroid")]
    NotIndependent,
    #[error("invalid augmenting tree: {0}")]
    InvalidTree(&'static str),
    #[error("minset mentions relation position {0}, beyond the ontology")]
    UnknownRelation(usize),
    #[error("minset family contains an empty set")]
    EmptyMinset,
    #[error("element {0} is outside the ground set")]
    OutsideGround(Element),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveParams {
    /// Labels kept per pending-work key when not exhaustive.
    pub max_labels_per_node: usize,
    /// `None` means exhaustive exactly when the ground set has at most 64 elements.
    pub exhaustive: Option<bool>,
    /// Accept only trees with positive net weight.
    pub weighted: bool,
    /// Search steps allowed per root before giving up on it.
    pub max_expansions: usize,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            max_labels_per_node: 64,
            exhaustive: None,
            weighted: true,
            max_expansions: 200_000,
        }
    }
}

impl SolveParams {
    pub fn is_exhaustive(&self, ground: usize) -> bool {
        self.exhaustive.unwrap_or(ground <= 64)
    }
}
