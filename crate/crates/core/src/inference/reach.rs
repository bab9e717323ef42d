use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::rules::{IS_A, IS_EQUIVALENT_TO, IS_SUBSET_OF};
use super::{FactSet, InferenceError};
use crate::ontology::{Fact, Identifier, MetadataRule, ObjectExpr, Ontology};

type Edges = BTreeSet<(Identifier, Identifier)>;

/// Closure of an all-atomic ontology computed as graph reachability.
///
/// Every property owns a directed graph whose edges are its triples.
/// Symmetric, inverse and sub-property declarations copy edges between
/// graphs; a transitive property's graph is replaced by its breadth-first
/// reachability relation; `isA` edges are extended along `isSubsetOf` edges
/// and both directions of `isEquivalentTo` edges. The stages repeat until no
/// graph grows.
pub fn reachability_closure(ontology: &Ontology) -> Result<FactSet, InferenceError> {
    let mut graphs: BTreeMap<Identifier, Edges> = BTreeMap::new();
    for t in ontology.relations() {
        let object = t
            .object
            .as_atom()
            .ok_or_else(|| InferenceError::NotReachable {
                reason: format!(
                    "relation `{}` has a conjunctive object `{}`",
                    t.id, t.object
                ),
            })?;
        graphs
            .entry(t.property.clone())
            .or_default()
            .insert((t.subject.clone(), object.clone()));
    }

    let mut size = count(&graphs);
    loop {
        for meta in ontology.metadata() {
            match meta {
                MetadataRule::Symmetric(p) => {
                    let reversed = reversed(graphs.get(p));
                    graphs.entry(p.clone()).or_default().extend(reversed);
                }
                MetadataRule::InverseOf(p, q) => {
                    let from_p = reversed(graphs.get(p));
                    let from_q = reversed(graphs.get(q));
                    graphs.entry(q.clone()).or_default().extend(from_p);
                    graphs.entry(p.clone()).or_default().extend(from_q);
                }
                MetadataRule::SubPropertyOf(p, q) => {
                    let lifted = graphs.get(p).cloned().unwrap_or_default();
                    graphs.entry(q.clone()).or_default().extend(lifted);
                }
                MetadataRule::Transitive(_) => {}
            }
        }
        for meta in ontology.metadata() {
            if let MetadataRule::Transitive(p) = meta {
                if let Some(edges) = graphs.get_mut(p) {
                    *edges = transitive_reach(edges);
                }
            }
        }
        bridge_memberships(&mut graphs);

        let grown = count(&graphs);
        if grown == size {
            break;
        }
        size = grown;
    }

    Ok(graphs
        .into_iter()
        .flat_map(|(p, edges)| {
            edges
                .into_iter()
                .map(move |(s, o)| Fact::new(s, p.clone(), ObjectExpr::atom(o)))
        })
        .collect())
}

fn count(graphs: &BTreeMap<Identifier, Edges>) -> usize {
    graphs.values().map(BTreeSet::len).sum()
}

fn reversed(edges: Option<&Edges>) -> Vec<(Identifier, Identifier)> {
    edges
        .into_iter()
        .flatten()
        .map(|(s, o)| (o.clone(), s.clone()))
        .collect()
}

fn adjacency(
    edges: impl IntoIterator<Item = (Identifier, Identifier)>,
) -> BTreeMap<Identifier, Vec<Identifier>> {
    let mut adj: BTreeMap<Identifier, Vec<Identifier>> = BTreeMap::new();
    for (s, o) in edges {
        adj.entry(s).or_default().push(o);
    }
    adj
}

/// Nodes reachable from `start` by one or more edges.
fn bfs(adj: &BTreeMap<Identifier, Vec<Identifier>>, start: &Identifier) -> BTreeSet<Identifier> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<&Identifier> = adj.get(start).into_iter().flatten().collect();
    while let Some(node) = queue.pop_front() {
        if seen.insert(node.clone()) {
            queue.extend(adj.get(node).into_iter().flatten());
        }
    }
    seen
}

fn transitive_reach(edges: &Edges) -> Edges {
    let adj = adjacency(edges.iter().cloned());
    adj.keys()
        .flat_map(|s| bfs(&adj, s).into_iter().map(move |o| (s.clone(), o)))
        .collect()
}

fn bridge_memberships(graphs: &mut BTreeMap<Identifier, Edges>) {
    let name = |s| Identifier::new(s).expect("builtin name");
    let (is_a, subset, equiv) = (name(IS_A), name(IS_SUBSET_OF), name(IS_EQUIVALENT_TO));
    let Some(members) = graphs.get(&is_a) else {
        return;
    };
    let class_edges = graphs.get(&subset).into_iter().flatten().cloned().chain(
        graphs
            .get(&equiv)
            .into_iter()
            .flatten()
            .flat_map(|(c, d)| [(c.clone(), d.clone()), (d.clone(), c.clone())]),
    );
    let adj = adjacency(class_edges);
    let derived: Vec<_> = members
        .iter()
        .flat_map(|(x, c)| bfs(&adj, c).into_iter().map(move |d| (x.clone(), d)))
        .collect();
    graphs.entry(is_a).or_default().extend(derived);
}
