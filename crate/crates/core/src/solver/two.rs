use std::collections::{BTreeMap, VecDeque};

use super::SolverError;
use crate::matroid::{Element, ElementSet, Matroid};

/// One augmenting path: alternately added and removed elements, starting
/// and ending with an addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathAugmentation {
    pub path: Vec<Element>,
    pub adds: ElementSet,
    pub removes: ElementSet,
}

/// Shortest augmenting path for `current` in the exchange graph of `(ma, mb)`.
///
/// Sources are outside elements `ma` accepts outright, sinks those `mb`
/// accepts outright. An outside `y` has a removal edge to every inside `x`
/// on its `mb` circuit; an inside `x` has a re-add edge to every outside `z`
/// whose `ma` circuit contains `x`. Breadth-first search from all sources
/// in index order returns the first sink reached.
pub fn augmenting_path<A: Matroid + ?Sized, B: Matroid + ?Sized>(
    ma: &A,
    mb: &B,
    current: &ElementSet,
) -> Option<PathAugmentation> {
    let n = ma.ground_size();
    let outside: Vec<Element> = (0..n)
        .map(Element)
        .filter(|e| !current.contains(e))
        .collect();

    let mut readd: BTreeMap<Element, Vec<Element>> = BTreeMap::new();
    let mut sources = Vec::new();
    for &z in &outside {
        match ma.circuit(current, z) {
            None => sources.push(z),
            Some(c) => {
                for x in c.into_iter().filter(|&x| x != z) {
                    readd.entry(x).or_default().push(z);
                }
            }
        }
    }
    let is_sink = |y: Element| mb.can_add(current, y);

    let mut parent: BTreeMap<Element, Option<Element>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &s in &sources {
        parent.insert(s, None);
        if is_sink(s) {
            return Some(trace(&parent, s));
        }
        queue.push_back(s);
    }
    while let Some(node) = queue.pop_front() {
        if current.contains(&node) {
            for &z in readd.get(&node).into_iter().flatten() {
                if parent.contains_key(&z) {
                    continue;
                }
                parent.insert(z, Some(node));
                if is_sink(z) {
                    return Some(trace(&parent, z));
                }
                queue.push_back(z);
            }
        } else if let Some(circuit) = mb.circuit(current, node) {
            for x in circuit.into_iter().filter(|&x| x != node) {
                if let std::collections::btree_map::Entry::Vacant(slot) = parent.entry(x) {
                    slot.insert(Some(node));
                    queue.push_back(x);
                }
            }
        }
    }
    None
}

fn trace(parent: &BTreeMap<Element, Option<Element>>, end: Element) -> PathAugmentation {
    let mut path = vec![end];
    let mut at = end;
    while let Some(Some(prev)) = parent.get(&at) {
        path.push(*prev);
        at = *prev;
    }
    path.reverse();
    let adds = path.iter().step_by(2).copied().collect();
    let removes = path.iter().skip(1).step_by(2).copied().collect();
    PathAugmentation {
        path,
        adds,
        removes,
    }
}

fn apply(current: &ElementSet, aug: &PathAugmentation) -> ElementSet {
    current
        .difference(&aug.removes)
        .chain(&aug.adds)
        .copied()
        .collect()
}

/// Maximum-cardinality common independent set, grown from `seed` by
/// repeated shortest augmenting paths.
pub fn intersect_two_from<A: Matroid + ?Sized, B: Matroid + ?Sized>(
    ma: &A,
    mb: &B,
    seed: &ElementSet,
) -> Result<ElementSet, SolverError> {
    if ma.ground_size() != mb.ground_size() {
        return Err(SolverError::GroundMismatch(
            ma.ground_size(),
            mb.ground_size(),
        ));
    }
    if !ma.is_independent(seed) || !mb.is_independent(seed) {
        return Err(SolverError::NotIndependent);
    }
    let mut current = seed.clone();
    while let Some(aug) = augmenting_path(ma, mb, &current) {
        current = apply(&current, &aug);
        debug_assert!(ma.is_independent(&current) && mb.is_independent(&current));
    }
    Ok(current)
}

pub fn intersect_two_exact<A: Matroid + ?Sized, B: Matroid + ?Sized>(
    ma: &A,
    mb: &B,
) -> Result<ElementSet, SolverError> {
    intersect_two_from(ma, mb, &ElementSet::new())
}
