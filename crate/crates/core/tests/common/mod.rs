#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use safereason::matroid::{forbidden_set_matroid, Element, ElementSet, Matroid, PartitionMatroid};
use safereason::ontology::{parse_ontology, MinsetFamily, Ontology};

pub const INDIVIDUALS: [&str; 5] = ["c0", "c1", "c2", "c3", "c4"];
pub const PROPERTIES: [&str; 4] = ["p0", "p1", "p2", "p3"];

/// Random ontology with atomic objects over a few properties, with random
/// transitive, symmetric, inverse and sub-property metadata. Built-in class
/// properties appear when `builtins` is set.
pub fn random_atomic_ontology(rng: &mut impl Rng, max_triples: usize, builtins: bool) -> Ontology {
    let mut props: Vec<&str> = PROPERTIES.to_vec();
    if builtins {
        props.extend(["isA", "isSubsetOf", "isEquivalentTo"]);
    }
    let mut text = String::new();
    for p in PROPERTIES {
        if rng.gen_bool(0.4) {
            writeln!(text, "meta {p} transitive").unwrap();
        }
        if rng.gen_bool(0.25) {
            writeln!(text, "meta {p} symmetric").unwrap();
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let pair: Vec<&&str> = PROPERTIES.choose_multiple(rng, 2).collect();
        let kind = if rng.gen_bool(0.5) {
            "inverseOf"
        } else {
            "subPropertyOf"
        };
        writeln!(text, "meta {} {kind} {}", pair[0], pair[1]).unwrap();
    }
    let mut seen = BTreeSet::new();
    let n = rng.gen_range(1..=max_triples);
    for i in 0..n {
        let s = INDIVIDUALS.choose(rng).unwrap();
        let p = props.choose(rng).unwrap();
        let o = INDIVIDUALS.choose(rng).unwrap();
        if seen.insert((s, p, o)) {
            writeln!(text, "r{i} {} {s} {p} {o}", rng.gen_range(1..=9)).unwrap();
        }
    }
    parse_ontology(&text).expect("generated ontology parses")
}

/// One of: free, a forbidden set, or a random partition.
pub fn random_source_matroid(rng: &mut impl Rng, ground: usize) -> Box<dyn Matroid> {
    match rng.gen_range(0..3) {
        0 => Box::new(PartitionMatroid::free(ground)),
        1 => {
            let size = rng.gen_range(1..=ground);
            let mut all: Vec<usize> = (0..ground).collect();
            all.shuffle(rng);
            let set: ElementSet = all[..size].iter().copied().map(Element).collect();
            Box::new(forbidden_set_matroid(&set, ground).unwrap())
        }
        _ => {
            let blocks = rng.gen_range(1..=ground);
            let mut members: Vec<Vec<Element>> = vec![Vec::new(); blocks];
            for e in 0..ground {
                if rng.gen_bool(0.8) {
                    members[rng.gen_range(0..blocks)].push(Element(e));
                }
            }
            let spec: Vec<(Vec<Element>, usize)> = members
                .into_iter()
                .filter(|m| !m.is_empty())
                .map(|m| {
                    let cap = rng.gen_range(0..m.len());
                    (m, cap)
                })
                .collect();
            Box::new(PartitionMatroid::new(ground, spec).unwrap())
        }
    }
}

pub fn subsets(n: usize) -> impl Iterator<Item = ElementSet> {
    (0..1u64 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).map(Element).collect())
}

/// Maximum weight of a set independent in every matroid, by enumeration.
pub fn brute_common_max(matroids: &[&dyn Matroid], weights: &[f64]) -> f64 {
    subsets(weights.len())
        .filter(|s| matroids.iter().all(|m| m.is_independent(s)))
        .map(|s| s.iter().map(|e| weights[e.0]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Up to `max_sets` random sets of size 2..=4 over `n` relations, minimized.
pub fn random_family(rng: &mut impl Rng, n: usize, max_sets: usize) -> MinsetFamily {
    let count = rng.gen_range(0..=max_sets);
    let mut all: Vec<usize> = (0..n).collect();
    MinsetFamily::new((0..count).map(|_| {
        all.shuffle(rng);
        let size = rng.gen_range(2..=4.min(n));
        all[..size].iter().copied().collect::<BTreeSet<usize>>()
    }))
}

/// Heaviest family-free subset of `0..weights.len()`, by enumeration.
pub fn brute_sanitize(weights: &[f64], family: &MinsetFamily) -> f64 {
    let n = weights.len();
    (0..1u64 << n)
        .map(|m| {
            (0..n)
                .filter(|i| m >> i & 1 == 1)
                .collect::<BTreeSet<usize>>()
        })
        .filter(|s| !family.violated_by(s))
        .map(|s| s.iter().map(|&i| weights[i]).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Kept set avoids the family and no removed relation can be added back.
pub fn safe_and_maximal(kept: &BTreeSet<usize>, n: usize, family: &MinsetFamily) -> bool {
    !family.violated_by(kept)
        && (0..n).filter(|i| !kept.contains(i)).all(|i| {
            let mut grown = kept.clone();
            grown.insert(i);
            family.violated_by(&grown)
        })
}
