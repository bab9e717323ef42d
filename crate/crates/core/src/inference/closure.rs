use std::collections::BTreeSet;

use super::rules::{matches_with_seed, FactIndex, GuardedHornRule};
use super::FactSet;

/// Least fixpoint of `base` under every rule whose guard is absent or listed
/// in `guards`, by semi-naive evaluation: each round only joins against at
/// least one fact derived in the previous round.
pub fn closure(base: &FactSet, rules: &[GuardedHornRule], guards: &BTreeSet<usize>) -> FactSet {
    let active: Vec<&GuardedHornRule> = rules.iter().filter(|r| r.is_enabled(guards)).collect();
    let mut all = base.clone();
    let mut delta: Vec<_> = base.iter().cloned().collect();
    while !delta.is_empty() {
        let mut fresh = FactSet::new();
        {
            let index = FactIndex::new(&all);
            for rule in &active {
                for at in 0..rule.body.len() {
                    for seed in &delta {
                        matches_with_seed(rule, at, seed, &index, |head, _| {
                            if !all.contains(&head) {
                                fresh.insert(head);
                            }
                        });
                    }
                }
            }
        }
        all.extend(fresh.iter().cloned());
        delta = fresh.into_iter().collect();
    }
    all
}
