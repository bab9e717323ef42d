//! Exact solvers for small instances.
//!
//! These back the `oracle` sanitize method and serve as reference answers
//! for the heuristic. Both refuse inputs outside their size envelope rather
//! than return an approximation.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matroid::{Element, ElementSet, Matroid};
use crate::ontology::MinsetFamily;

/// Most distinct relations a hitting-set instance may mention.
pub const HITTING_SET_LIMIT: usize = 25;
/// Largest ground set for exhaustive intersection search.
pub const INTERSECTION_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle envelope exceeded: {size} {what} (limit {limit})")]
    EnvelopeExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("matroids disagree on the ground set")]
    GroundMismatch,
    #[error("family contains an empty set, which no set can hit")]
    EmptyMember,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingSetInstance<'a> {
    pub family: &'a MinsetFamily,
    /// Non-negative weight per relation position.
    pub weights: &'a [f64],
}

fn tolerance(scale: f64) -> f64 {
    1e-9 * (1.0 + scale.abs())
}

fn sorted_sum(set: &BTreeSet<usize>, weights: &[f64]) -> f64 {
    set.iter().map(|&i| weights[i]).sum()
}

/// Minimum-weight set meeting every member of the family.
///
/// Branch and bound: pick the unhit member with the largest total element
/// degree, branch on each of its admissible elements (excluding the
/// elements tried in earlier branches), prune once the partial cost exceeds
/// the best complete cost. Equal-cost answers resolve to the
/// lexicographically smallest sorted position sequence.
pub fn exact_hitting_set(inst: &HittingSetInstance) -> Result<BTreeSet<usize>, OracleError> {
    let sets = inst.family.sets();
    if sets.iter().any(BTreeSet::is_empty) {
        return Err(OracleError::EmptyMember);
    }
    let universe: BTreeSet<usize> = sets.iter().flatten().copied().collect();
    if universe.len() > HITTING_SET_LIMIT {
        return Err(OracleError::EnvelopeExceeded {
            what: "relations",
            size: universe.len(),
            limit: HITTING_SET_LIMIT,
        });
    }
    let mut search = HittingSearch {
        sets,
        weights: inst.weights,
        best: None,
    };
    search.run(&mut BTreeSet::new(), 0.0, &mut BTreeSet::new());
    Ok(search.best.map(|(_, set)| set).unwrap_or_default())
}

struct HittingSearch<'a> {
    sets: &'a [BTreeSet<usize>],
    weights: &'a [f64],
    best: Option<(f64, BTreeSet<usize>)>,
}

impl HittingSearch<'_> {
    fn run(&mut self, chosen: &mut BTreeSet<usize>, cost: f64, banned: &mut BTreeSet<usize>) {
        if let Some((best, _)) = &self.best {
            if cost > best + tolerance(*best) {
                return;
            }
        }
        let unhit: Vec<&BTreeSet<usize>> =
            self.sets.iter().filter(|s| s.is_disjoint(chosen)).collect();
        if unhit.is_empty() {
            let exact = sorted_sum(chosen, self.weights);
            let better = match &self.best {
                None => true,
                Some((best, set)) => {
                    exact < best - tolerance(*best)
                        || (exact <= best + tolerance(*best) && chosen.iter().lt(set.iter()))
                }
            };
            if better {
                self.best = Some((exact, chosen.clone()));
            }
            return;
        }
        let degree = |x: &usize| unhit.iter().filter(|s| s.contains(x)).count();
        let target = unhit
            .iter()
            .enumerate()
            .max_by_key(|(idx, s)| (s.iter().map(degree).sum::<usize>(), std::cmp::Reverse(*idx)))
            .map(|(_, s)| *s)
            .expect("unhit is non-empty");
        let mut candidates: Vec<usize> = target
            .iter()
            .copied()
            .filter(|x| !banned.contains(x))
            .collect();
        candidates.sort_by_key(|x| (std::cmp::Reverse(degree(x)), *x));

        let mut newly_banned = Vec::new();
        for x in candidates {
            chosen.insert(x);
            self.run(chosen, cost + self.weights[x], banned);
            chosen.remove(&x);
            banned.insert(x);
            newly_banned.push(x);
        }
        for x in newly_banned {
            banned.remove(&x);
        }
    }
}

/// Every maximum-weight set independent in all `matroids`, with its weight.
///
/// Depth-first over elements in index order: an element is included only
/// if every matroid still accepts it, and a branch is cut when even adding
/// all remaining positive weights cannot reach the best weight found.
pub fn exhaustive_optima(
    matroids: &[&dyn Matroid],
    weights: &[f64],
) -> Result<(f64, Vec<ElementSet>), OracleError> {
    let n = matroids.first().map_or(weights.len(), |m| m.ground_size());
    if matroids.iter().any(|m| m.ground_size() != n) || weights.len() != n {
        return Err(OracleError::GroundMismatch);
    }
    if n > INTERSECTION_LIMIT {
        return Err(OracleError::EnvelopeExceeded {
            what: "ground elements",
            size: n,
            limit: INTERSECTION_LIMIT,
        });
    }
    let mut suffix = vec![0.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + weights[i].max(0.0);
    }
    let mut search = OptimaSearch {
        matroids,
        weights,
        suffix,
        best: f64::NEG_INFINITY,
        optima: Vec::new(),
    };
    search.run(0, &mut ElementSet::new(), 0.0);
    Ok((search.best, search.optima))
}

struct OptimaSearch<'a> {
    matroids: &'a [&'a dyn Matroid],
    weights: &'a [f64],
    suffix: Vec<f64>,
    best: f64,
    optima: Vec<ElementSet>,
}

impl OptimaSearch<'_> {
    fn run(&mut self, at: usize, chosen: &mut ElementSet, weight: f64) {
        if self.best.is_finite() && weight + self.suffix[at] < self.best - tolerance(self.best) {
            return;
        }
        if at == self.weights.len() {
            let exact: f64 = chosen.iter().map(|e| self.weights[e.0]).sum();
            if !self.best.is_finite() || exact > self.best + tolerance(self.best) {
                self.best = exact;
                self.optima.clear();
            }
            if exact >= self.best - tolerance(self.best) {
                self.optima.push(chosen.clone());
            }
            return;
        }
        let e = Element(at);
        if self.matroids.iter().all(|m| m.can_add(chosen, e)) {
            chosen.insert(e);
            self.run(at + 1, chosen, weight + self.weights[at]);
            chosen.remove(&e);
        }
        self.run(at + 1, chosen, weight);
    }
}

/// A maximum-weight common independent set; ties resolve to the
/// lexicographically smallest sorted element sequence.
pub fn exhaustive_max_common_independent(
    matroids: &[&dyn Matroid],
    weights: &[f64],
) -> Result<ElementSet, OracleError> {
    let (_, optima) = exhaustive_optima(matroids, weights)?;
    Ok(optima
        .into_iter()
        .min_by(|a, b| a.iter().cmp(b.iter()))
        .unwrap_or_default())
}
