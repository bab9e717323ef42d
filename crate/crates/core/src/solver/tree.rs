use std::collections::{BTreeSet, HashMap};

use super::border::BorderGraph;
use super::{SolveParams, SolverError};
use crate::matroid::{Element, ElementSet, Matroid};

/// An exchange `I -> (I \ removes) ∪ adds` with `|adds| = |removes| + 1`.
///
/// Only trees produced by [`find_augmenting_tree`] (or checked with
/// [`AugmentingTree::validate`]) can be applied.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentingTree {
    adds: ElementSet,
    removes: ElementSet,
    net_weight: f64,
    base: ElementSet,
    validated: bool,
}

impl AugmentingTree {
    /// An unvalidated tree over `base`.
    pub fn new(base: ElementSet, adds: ElementSet, removes: ElementSet, weights: &[f64]) -> Self {
        let net_weight = adds.iter().map(|e| weights[e.0]).sum::<f64>()
            - removes.iter().map(|e| weights[e.0]).sum::<f64>();
        AugmentingTree {
            adds,
            removes,
            net_weight,
            base,
            validated: false,
        }
    }

    pub fn adds(&self) -> &ElementSet {
        &self.adds
    }

    pub fn removes(&self) -> &ElementSet {
        &self.removes
    }

    pub fn net_weight(&self) -> f64 {
        self.net_weight
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    fn result(&self) -> ElementSet {
        self.base
            .difference(&self.removes)
            .chain(&self.adds)
            .copied()
            .collect()
    }

    fn well_formed(&self) -> bool {
        self.adds.is_disjoint(&self.base)
            && self.removes.is_subset(&self.base)
            && self.adds.len() == self.removes.len() + 1
    }

    /// Marks the tree valid iff it is well formed and its result is
    /// independent in every matroid.
    pub fn validate(&mut self, matroids: &[&dyn Matroid]) -> bool {
        let result = self.result();
        self.validated = self.well_formed() && matroids.iter().all(|m| m.is_independent(&result));
        self.validated
    }
}

/// `(I \ removes) ∪ adds`, refusing trees that were not validated against `current`.
pub fn apply_augmentation(
    current: &ElementSet,
    tree: &AugmentingTree,
) -> Result<ElementSet, SolverError> {
    if !tree.validated {
        return Err(SolverError::InvalidTree("tree was not validated"));
    }
    if &tree.base != current {
        return Err(SolverError::InvalidTree(
            "tree was built for a different set",
        ));
    }
    if !tree.well_formed() {
        return Err(SolverError::InvalidTree(
            "adds overlap or removes escape the set",
        ));
    }
    Ok(tree.result())
}

/// Search state summary: nodes touched so far and accumulated net weight.
/// A label dominates another with the same pending work when it used a
/// subset of the nodes and gained at least as much weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub used: ElementSet,
    pub weight: f64,
}

impl Label {
    pub fn dominates(&self, other: &Label) -> bool {
        self.used.is_subset(&other.used) && self.weight >= other.weight
    }
}

/// Work left on a partial tree. `Close` must break the `m2` / `m3` circuits
/// opened by an added node; `Refill` must re-add one outside node whose `m1`
/// circuit contained a removed node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Task {
    Close { node: Element, m2: bool, m3: bool },
    Refill { removed: Element },
}

#[derive(Debug, Clone)]
struct Partial {
    adds: ElementSet,
    removes: ElementSet,
    pending: BTreeSet<Task>,
    label: Label,
}

impl Partial {
    fn add(&mut self, graph: &BorderGraph, y: Element, w: f64) {
        self.adds.insert(y);
        self.label.used.insert(y);
        self.label.weight += w;
        let (m2, m3) = (graph.opens(y, 1), graph.opens(y, 2));
        if m2 || m3 {
            self.pending.insert(Task::Close { node: y, m2, m3 });
        }
    }

    fn remove(&mut self, x: Element, w: f64) {
        self.removes.insert(x);
        self.label.used.insert(x);
        self.label.weight -= w;
        self.pending.insert(Task::Refill { removed: x });
    }
}

struct Best {
    weight: f64,
    adds: ElementSet,
    removes: ElementSet,
}

fn tolerance(scale: f64) -> f64 {
    1e-9 * (1.0 + scale.abs())
}

/// Best augmenting tree for `graph.current()`, or `None`.
///
/// Each root seeds a depth-first expansion: an added node breaks its `m2`
/// and `m3` circuits by removing either one shared inside element or one
/// element from each; each removed element is refilled by exactly one
/// outside node whose `m1` circuit it lies on. No node is used twice.
/// Finished trees are checked for independence in all three matroids; the
/// highest net weight wins, ties going to the smallest add set. In
/// weighted mode only trees with positive net weight count.
pub fn find_augmenting_tree(
    matroids: [&dyn Matroid; 3],
    graph: &BorderGraph,
    weights: &[f64],
    params: &SolveParams,
) -> Option<AugmentingTree> {
    let exhaustive = params.is_exhaustive(matroids[0].ground_size());
    let current = graph.current();
    let mut best: Option<Best> = None;

    for &root in graph.roots() {
        let mut labels: HashMap<BTreeSet<Task>, Vec<Label>> = HashMap::new();
        let mut start = Partial {
            adds: ElementSet::new(),
            removes: ElementSet::new(),
            pending: BTreeSet::new(),
            label: Label {
                used: ElementSet::new(),
                weight: 0.0,
            },
        };
        start.add(graph, root, weights[root.0]);
        let mut stack = vec![start];
        let mut expansions = 0usize;

        while let Some(mut partial) = stack.pop() {
            expansions += 1;
            if expansions > params.max_expansions {
                break;
            }
            let Some(task) = partial.pending.pop_first() else {
                consider(&mut best, partial, matroids, current, params);
                continue;
            };
            let mut children = expand(graph, weights, &partial, &task);
            // Depth-first with smallest choices explored first.
            children.reverse();
            for child in children {
                if admit(&mut labels, &child, exhaustive, params.max_labels_per_node) {
                    stack.push(child);
                }
            }
        }
    }

    best.map(|b| {
        let mut tree = AugmentingTree::new(current.clone(), b.adds, b.removes, weights);
        let ok = tree.validate(&matroids);
        debug_assert!(ok);
        tree
    })
}

fn expand(graph: &BorderGraph, weights: &[f64], partial: &Partial, task: &Task) -> Vec<Partial> {
    let free = |c: Option<&ElementSet>| -> Vec<Element> {
        c.into_iter()
            .flatten()
            .copied()
            .filter(|x| !partial.label.used.contains(x))
            .collect()
    };
    let mut out = Vec::new();
    match *task {
        Task::Close { node, m2, m3 } => {
            let c2 = if m2 {
                free(graph.circuit(node, 1))
            } else {
                Vec::new()
            };
            let c3 = if m3 {
                free(graph.circuit(node, 2))
            } else {
                Vec::new()
            };
            let mut removal_sets: Vec<Vec<Element>> = Vec::new();
            match (m2, m3) {
                (true, true) => {
                    removal_sets.extend(c2.iter().filter(|x| c3.contains(x)).map(|&x| vec![x]));
                    for &x2 in &c2 {
                        for &x3 in c3.iter().filter(|&&x3| x3 != x2) {
                            removal_sets.push(vec![x2, x3]);
                        }
                    }
                }
                (true, false) => removal_sets.extend(c2.iter().map(|&x| vec![x])),
                (false, true) => removal_sets.extend(c3.iter().map(|&x| vec![x])),
                (false, false) => unreachable!("close task without circuits"),
            }
            for set in removal_sets {
                let mut child = partial.clone();
                for x in set {
                    child.remove(x, weights[x.0]);
                }
                out.push(child);
            }
        }
        Task::Refill { removed } => {
            for &y in graph.readd_targets(removed) {
                if partial.label.used.contains(&y) {
                    continue;
                }
                let mut child = partial.clone();
                child.add(graph, y, weights[y.0]);
                out.push(child);
            }
        }
    }
    out
}

fn admit(
    labels: &mut HashMap<BTreeSet<Task>, Vec<Label>>,
    child: &Partial,
    exhaustive: bool,
    beam: usize,
) -> bool {
    let stored = labels.entry(child.pending.clone()).or_default();
    if stored.iter().any(|l| l.dominates(&child.label)) {
        return false;
    }
    stored.retain(|l| !child.label.dominates(l));
    if !exhaustive && stored.len() >= beam {
        return false;
    }
    stored.push(child.label.clone());
    true
}

fn consider(
    best: &mut Option<Best>,
    partial: Partial,
    matroids: [&dyn Matroid; 3],
    current: &ElementSet,
    params: &SolveParams,
) {
    let weight = partial.label.weight;
    if params.weighted && weight <= tolerance(weight) {
        return;
    }
    if let Some(b) = best.as_ref() {
        let worse = weight < b.weight - tolerance(b.weight);
        let tied = !worse && weight <= b.weight + tolerance(b.weight);
        if worse || (tied && partial.adds.iter().ge(b.adds.iter())) {
            return;
        }
    }
    let result: ElementSet = current
        .difference(&partial.removes)
        .chain(&partial.adds)
        .copied()
        .collect();
    if matroids.iter().all(|m| m.is_independent(&result)) {
        *best = Some(Best {
            weight,
            adds: partial.adds,
            removes: partial.removes,
        });
    }
}
