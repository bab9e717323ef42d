use std::collections::{BTreeMap, BTreeSet};

use super::rules::{matches_with_seed, FactIndex, GuardedHornRule};
use super::InferenceError;
use crate::ontology::{Fact, MinsetFamily, Ontology};

/// Minimal relation sets from which each derivable fact follows.
///
/// Every relation's own fact starts with the family `{{r}}`. A rule firing on
/// body facts with families `F1..Fn` contributes every minimized union
/// `S1 ∪ .. ∪ Sn` (plus the guard relation, if any) to its head's family.
/// Families are kept as antichains and the rounds repeat, re-firing only
/// rules touching a fact whose family changed, until nothing changes.
pub(crate) fn support_families(
    ontology: &Ontology,
    rules: &[GuardedHornRule],
    cap: usize,
) -> Result<BTreeMap<Fact, MinsetFamily>, InferenceError> {
    let mut families: BTreeMap<Fact, MinsetFamily> = BTreeMap::new();
    for (pos, t) in ontology.relations().iter().enumerate() {
        families
            .entry(t.fact())
            .or_default()
            .insert(BTreeSet::from([pos]));
    }
    let mut changed: BTreeSet<Fact> = families.keys().cloned().collect();

    while !changed.is_empty() {
        let mut firings: Vec<(Fact, Option<usize>, Vec<Fact>)> = Vec::new();
        {
            let index = FactIndex::new(families.keys());
            for rule in rules {
                for at in 0..rule.body.len() {
                    for seed in &changed {
                        matches_with_seed(rule, at, seed, &index, |head, body| {
                            firings.push((
                                head,
                                rule.guard,
                                body.iter().map(|f| (*f).clone()).collect(),
                            ));
                        });
                    }
                }
            }
        }
        firings.sort();
        firings.dedup();

        let mut updates: BTreeMap<Fact, Vec<BTreeSet<usize>>> = BTreeMap::new();
        for (head, guard, body) in firings {
            let mut product = MinsetFamily::new([guard.into_iter().collect()]);
            for fact in &body {
                let family = &families[fact];
                let mut next = MinsetFamily::default();
                for left in product.sets() {
                    for right in family.sets() {
                        next.insert(left.union(right).copied().collect());
                    }
                }
                product = next;
            }
            updates
                .entry(head)
                .or_default()
                .extend(product.sets().iter().cloned());
        }

        let mut next_changed = BTreeSet::new();
        for (head, sets) in updates {
            let family = families.entry(head.clone()).or_default();
            let mut grew = false;
            for set in sets {
                grew |= family.insert(set);
            }
            if family.len() > cap {
                return Err(InferenceError::CapExceeded {
                    fact: head.to_string(),
                    cap,
                });
            }
            if grew {
                next_changed.insert(head);
            }
        }
        changed = next_changed;
    }
    Ok(families)
}
