use std::collections::BTreeMap;

use super::SolverError;
use crate::matroid::{Element, ElementSet, Matroid};

/// Edge types: 1 re-adds an outside element after removing an inside one;
/// 2 and 3 remove an inside element to break a circuit in `m2` / `m3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BorderEdge {
    pub from: Element,
    pub to: Element,
    pub kind: u8,
}

/// Exchange structure of a common independent set `I` in three matroids.
///
/// For each outside element `y` the circuit of `I + y` in each matroid is
/// stored (without `y` itself). Roots are outside elements that `m1`
/// accepts outright.
#[derive(Debug, Clone)]
pub struct BorderGraph {
    current: ElementSet,
    circuits: [BTreeMap<Element, ElementSet>; 3],
    readd: BTreeMap<Element, Vec<Element>>,
    roots: Vec<Element>,
    edges: Vec<BorderEdge>,
}

impl BorderGraph {
    /// The set `I` this graph was built for.
    pub fn current(&self) -> &ElementSet {
        &self.current
    }

    pub fn roots(&self) -> &[Element] {
        &self.roots
    }

    /// Roots that open no circuit in `m2` or `m3`; each alone augments `I`.
    pub fn isolated(&self) -> Vec<Element> {
        self.roots
            .iter()
            .copied()
            .filter(|r| !self.opens(*r, 1) && !self.opens(*r, 2))
            .collect()
    }

    /// Edges sorted by `(from, to, kind)`.
    pub fn edges(&self) -> &[BorderEdge] {
        &self.edges
    }

    /// Whether adding `y` closes a circuit in matroid `index` (0-based).
    pub fn opens(&self, y: Element, index: usize) -> bool {
        self.circuits[index].contains_key(&y)
    }

    /// Inside elements on the circuit `y` closes in matroid `index`.
    pub fn circuit(&self, y: Element, index: usize) -> Option<&ElementSet> {
        self.circuits[index].get(&y)
    }

    /// Outside elements whose `m1` circuit contains the inside element `x`.
    pub fn readd_targets(&self, x: Element) -> &[Element] {
        self.readd.get(&x).map_or(&[], Vec::as_slice)
    }

    /// One `<from> <to> type<k>` line per edge, lines sorted.
    pub fn dump(&self, name: impl Fn(Element) -> String) -> String {
        let mut lines: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{} {} type{}\n", name(e.from), name(e.to), e.kind))
            .collect();
        lines.sort();
        lines.concat()
    }
}

pub fn build_border_graph(
    matroids: [&dyn Matroid; 3],
    current: &ElementSet,
) -> Result<BorderGraph, SolverError> {
    let n = matroids[0].ground_size();
    for m in &matroids[1..] {
        if m.ground_size() != n {
            return Err(SolverError::GroundMismatch(n, m.ground_size()));
        }
    }
    if current.iter().any(|e| e.0 >= n) || !matroids.iter().all(|m| m.is_independent(current)) {
        return Err(SolverError::NotIndependent);
    }

    let mut circuits: [BTreeMap<Element, ElementSet>; 3] = Default::default();
    let mut readd: BTreeMap<Element, Vec<Element>> = BTreeMap::new();
    let mut roots = Vec::new();
    let mut edges = Vec::new();
    for y in (0..n).map(Element).filter(|e| !current.contains(e)) {
        for (t, m) in matroids.iter().enumerate() {
            if let Some(mut c) = m.circuit(current, y) {
                c.remove(&y);
                for &x in &c {
                    edges.push(if t == 0 {
                        readd.entry(x).or_default().push(y);
                        BorderEdge {
                            from: x,
                            to: y,
                            kind: 1,
                        }
                    } else {
                        BorderEdge {
                            from: y,
                            to: x,
                            kind: t as u8 + 1,
                        }
                    });
                }
                circuits[t].insert(y, c);
            }
        }
        if !circuits[0].contains_key(&y) {
            roots.push(y);
        }
    }
    edges.sort();
    Ok(BorderGraph {
        current: current.clone(),
        circuits,
        readd,
        roots,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{parse_explicit, PartitionMatroid};

    #[test]
    fn worked_fixture_edges() {
        let (g, m1) = parse_explicit(include_str!("../../fixtures/worked_m1.matroid")).unwrap();
        let (_, m2) = parse_explicit(include_str!("../../fixtures/worked_m2.matroid")).unwrap();
        let m3 = PartitionMatroid::free(5);
        let graph = build_border_graph([&m1, &m2, &m3], &g.set(&["e2", "e4"])).unwrap();
        let dump = graph.dump(|e| g.name(e).to_string());
        assert_eq!(
            dump,
            "e1 e2 type2\ne1 e4 type2\ne2 e3 type1\ne3 e2 type2\ne3 e4 type2\ne4 e5 type1\n"
        );
        let roots: Vec<&str> = graph.roots().iter().map(|&e| g.name(e)).collect();
        assert_eq!(roots, vec!["e1"]);
        assert!(graph.isolated().is_empty());
        assert_eq!(
            graph.readd_targets(g.element("e4").unwrap()),
            &[g.element("e5").unwrap()]
        );
    }

    #[test]
    fn rejects_dependent_set() {
        let m = PartitionMatroid::new(2, [(vec![Element(0), Element(1)], 1)]).unwrap();
        let free = PartitionMatroid::free(2);
        let both = ElementSet::from([Element(0), Element(1)]);
        assert_eq!(
            build_border_graph([&m, &free, &free], &both).unwrap_err(),
            SolverError::NotIndependent
        );
    }
}
