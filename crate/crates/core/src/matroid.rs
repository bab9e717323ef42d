//! Matroids given by independence oracles.
//!
//! Elements are dense indices `0..ground_size()`. Concrete matroids here are
//! the ones the safe-ontology formulation needs: partition matroids (which
//! include the forbidden-set matroids), matroids given by their bases,
//! arbitrary set families (for axiom checking), and direct sums.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub usize);

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub type ElementSet = BTreeSet<Element>;

/// Largest ground set accepted by [`check_matroid_axioms`].
pub const AXIOM_CHECK_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("element {element} outside ground set of size {ground}")]
    OutsideGround { element: Element, ground: usize },
    #[error("set is not independent")]
    NotIndependent,
    #[error("element {0} already in the set")]
    AlreadyPresent(Element),
    #[error("bases have different cardinalities ({0} and {1})")]
    UnequalBases(usize, usize),
    #[error("a matroid needs at least one basis")]
    NoBases,
    #[error("ground set of size {size} exceeds the limit {limit}")]
    GroundTooLarge { size: usize, limit: usize },
    #[error("forbidden set is empty")]
    EmptyForbiddenSet,
    #[error("element {0} belongs to more than one block or component")]
    Overlap(Element),
    #[error("ground sets differ ({0} vs {1})")]
    GroundMismatch(usize, usize),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Independence oracle over the ground set `0..ground_size()`.
pub trait Matroid: Send + Sync {
    fn ground_size(&self) -> usize;

    fn is_independent(&self, set: &ElementSet) -> bool;

    /// Whether `set ∪ {e}` is independent, for independent `set`.
    fn can_add(&self, set: &ElementSet, e: Element) -> bool {
        let mut grown = set.clone();
        grown.insert(e);
        self.is_independent(&grown)
    }

    /// The circuit of `indep ∪ {e}`, or `None` when that set is independent.
    /// `indep` must be independent and must not contain `e`.
    fn circuit(&self, indep: &ElementSet, e: Element) -> Option<ElementSet> {
        circuit_by_deletion(self, indep, e)
    }
}

/// A member `x` of `indep` lies on the unique circuit of `indep ∪ {e}`
/// exactly when deleting it restores independence.
pub fn circuit_by_deletion<M: Matroid + ?Sized>(
    m: &M,
    indep: &ElementSet,
    e: Element,
) -> Option<ElementSet> {
    if m.can_add(indep, e) {
        return None;
    }
    let mut circuit = ElementSet::from([e]);
    for &x in indep {
        let mut rest = indep.clone();
        rest.remove(&x);
        if m.can_add(&rest, e) {
            circuit.insert(x);
        }
    }
    Some(circuit)
}

fn check_ground<M: Matroid + ?Sized>(m: &M, set: &ElementSet) -> Result<(), MatroidError> {
    let ground = m.ground_size();
    match set.iter().find(|e| e.0 >= ground) {
        Some(&element) => Err(MatroidError::OutsideGround { element, ground }),
        None => Ok(()),
    }
}

/// Checked independence query.
pub fn is_independent<M: Matroid + ?Sized>(m: &M, set: &ElementSet) -> Result<bool, MatroidError> {
    check_ground(m, set)?;
    Ok(m.is_independent(set))
}

/// Checked circuit query; see [`Matroid::circuit`].
pub fn find_circuit<M: Matroid + ?Sized>(
    m: &M,
    indep: &ElementSet,
    e: Element,
) -> Result<Option<ElementSet>, MatroidError> {
    check_ground(m, indep)?;
    check_ground(m, &ElementSet::from([e]))?;
    if indep.contains(&e) {
        return Err(MatroidError::AlreadyPresent(e));
    }
    if !m.is_independent(indep) {
        return Err(MatroidError::NotIndependent);
    }
    Ok(m.circuit(indep, e))
}

/// Scans elements by weight descending, then index ascending, keeping each
/// one that preserves independence. Negative-weight elements are skipped.
/// Exact for a single matroid.
pub fn greedy_max_weight<M: Matroid + ?Sized>(m: &M, weights: &[f64]) -> ElementSet {
    let mut order: Vec<usize> = (0..m.ground_size())
        .filter(|&i| weights[i] >= 0.0)
        .collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut chosen = ElementSet::new();
    for i in order {
        if m.can_add(&chosen, Element(i)) {
            chosen.insert(Element(i));
        }
    }
    chosen
}

pub fn rank<M: Matroid + ?Sized>(m: &M) -> usize {
    greedy_max_weight(m, &vec![1.0; m.ground_size()]).len()
}

/// Exhaustively checks that the empty set is independent, the family is
/// closed under taking subsets, and the exchange property holds for every
/// pair of independent sets whose sizes differ by one.
pub fn check_matroid_axioms<M: Matroid + ?Sized>(m: &M) -> Result<bool, MatroidError> {
    let n = m.ground_size();
    if n > AXIOM_CHECK_LIMIT {
        return Err(MatroidError::GroundTooLarge {
            size: n,
            limit: AXIOM_CHECK_LIMIT,
        });
    }
    let independent: Vec<bool> = (0..1u32 << n)
        .map(|mask| m.is_independent(&set_of(mask)))
        .collect();
    if !independent[0] {
        return Ok(false);
    }
    for mask in 0..1u32 << n {
        if !independent[mask as usize] {
            continue;
        }
        for i in 0..n {
            if mask >> i & 1 == 1 && !independent[(mask & !(1 << i)) as usize] {
                return Ok(false);
            }
        }
    }
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for mask in 0..1u32 << n {
        if independent[mask as usize] {
            by_size[mask.count_ones() as usize].push(mask);
        }
    }
    for k in 0..n {
        for &small in &by_size[k] {
            for &large in &by_size[k + 1] {
                let extra = large & !small;
                let exchangeable =
                    (0..n).any(|i| extra >> i & 1 == 1 && independent[(small | 1 << i) as usize]);
                if !exchangeable {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn set_of(mask: u32) -> ElementSet {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(Element)
        .collect()
}

/// Independence means at most `capacity` elements from each block; elements
/// outside every block are unconstrained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    ground: usize,
    block_of: Vec<Option<usize>>,
    capacity: Vec<usize>,
}

impl PartitionMatroid {
    pub fn new(
        ground: usize,
        blocks: impl IntoIterator<Item = (Vec<Element>, usize)>,
    ) -> Result<Self, MatroidError> {
        let mut m = PartitionMatroid {
            ground,
            block_of: vec![None; ground],
            capacity: Vec::new(),
        };
        for (members, cap) in blocks {
            let id = m.capacity.len();
            for e in members {
                let slot = m
                    .block_of
                    .get_mut(e.0)
                    .ok_or(MatroidError::OutsideGround { element: e, ground })?;
                if slot.is_some() {
                    return Err(MatroidError::Overlap(e));
                }
                *slot = Some(id);
            }
            m.capacity.push(cap);
        }
        Ok(m)
    }

    /// Every subset is independent.
    pub fn free(ground: usize) -> Self {
        PartitionMatroid {
            ground,
            block_of: vec![None; ground],
            capacity: Vec::new(),
        }
    }

    pub fn block_of(&self, e: Element) -> Option<usize> {
        self.block_of[e.0]
    }

    pub fn capacity(&self, block: usize) -> usize {
        self.capacity[block]
    }

    pub fn blocks(&self) -> Vec<(ElementSet, usize)> {
        let mut blocks: Vec<(ElementSet, usize)> = self
            .capacity
            .iter()
            .map(|&c| (ElementSet::new(), c))
            .collect();
        for (i, b) in self.block_of.iter().enumerate() {
            if let Some(b) = b {
                blocks[*b].0.insert(Element(i));
            }
        }
        blocks
    }

    fn load(&self, set: &ElementSet, block: usize) -> usize {
        set.iter()
            .filter(|e| self.block_of[e.0] == Some(block))
            .count()
    }
}

impl Matroid for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        let mut load: BTreeMap<usize, usize> = BTreeMap::new();
        for e in set {
            if let Some(b) = self.block_of[e.0] {
                let n = load.entry(b).or_default();
                *n += 1;
                if *n > self.capacity[b] {
                    return false;
                }
            }
        }
        true
    }

    fn can_add(&self, set: &ElementSet, e: Element) -> bool {
        match self.block_of[e.0] {
            None => true,
            Some(b) => self.load(set, b) < self.capacity[b],
        }
    }

    fn circuit(&self, indep: &ElementSet, e: Element) -> Option<ElementSet> {
        let b = self.block_of[e.0]?;
        if self.load(indep, b) < self.capacity[b] {
            return None;
        }
        let mut circuit: ElementSet = indep
            .iter()
            .copied()
            .filter(|x| self.block_of[x.0] == Some(b))
            .collect();
        circuit.insert(e);
        Some(circuit)
    }
}

/// The matroid whose independent sets are the proper-or-disjoint subsets of
/// `forbidden`: one block holding `forbidden` with capacity `|forbidden| - 1`.
pub fn forbidden_set_matroid(
    forbidden: &ElementSet,
    ground: usize,
) -> Result<PartitionMatroid, MatroidError> {
    if forbidden.is_empty() {
        return Err(MatroidError::EmptyForbiddenSet);
    }
    PartitionMatroid::new(
        ground,
        [(forbidden.iter().copied().collect(), forbidden.len() - 1)],
    )
}

/// A matroid listed by its bases; independent sets are subsets of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitMatroid {
    ground: usize,
    bases: Vec<ElementSet>,
}

impl ExplicitMatroid {
    pub fn new(ground: usize, bases: Vec<ElementSet>) -> Result<Self, MatroidError> {
        let first = bases.first().ok_or(MatroidError::NoBases)?.len();
        for basis in &bases {
            if let Some(&element) = basis.iter().find(|e| e.0 >= ground) {
                return Err(MatroidError::OutsideGround { element, ground });
            }
            if basis.len() != first {
                return Err(MatroidError::UnequalBases(first, basis.len()));
            }
        }
        Ok(ExplicitMatroid { ground, bases })
    }

    pub fn bases(&self) -> &[ElementSet] {
        &self.bases
    }
}

impl Matroid for ExplicitMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.bases.iter().any(|b| set.is_subset(b))
    }
}

/// Independence is membership in a listed family. No axioms are assumed,
/// so this can also describe non-matroids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    ground: usize,
    family: BTreeSet<ElementSet>,
}

impl SetFamily {
    pub fn new(ground: usize, family: impl IntoIterator<Item = ElementSet>) -> Self {
        SetFamily {
            ground,
            family: family.into_iter().collect(),
        }
    }
}

impl Matroid for SetFamily {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        self.family.contains(set)
    }
}

struct Component {
    matroid: Box<dyn Matroid>,
    elements: Vec<Element>,
}

/// Components act on disjoint parts of the ground set; elements in no
/// component are free.
pub struct DirectSumMatroid {
    ground: usize,
    components: Vec<Component>,
    owner: Vec<Option<(usize, usize)>>,
}

impl fmt::Debug for DirectSumMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectSumMatroid")
            .field("ground", &self.ground)
            .field(
                "components",
                &self
                    .components
                    .iter()
                    .map(|c| &c.elements)
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl DirectSumMatroid {
    /// `components` pairs each matroid with the global elements its local
    /// elements `0..` map to. `free` lists the unconstrained elements; the
    /// ground set is the disjoint union of all of them.
    pub fn new(
        components: Vec<(Box<dyn Matroid>, Vec<Element>)>,
        free: &ElementSet,
    ) -> Result<Self, MatroidError> {
        let ground = components
            .iter()
            .flat_map(|(_, els)| els.iter())
            .chain(free)
            .map(|e| e.0 + 1)
            .max()
            .unwrap_or(0);
        let mut owner = vec![None; ground];
        let mut claimed = vec![false; ground];
        for e in free {
            claimed[e.0] = true;
        }
        let mut parts = Vec::new();
        for (idx, (matroid, elements)) in components.into_iter().enumerate() {
            if matroid.ground_size() != elements.len() {
                return Err(MatroidError::GroundMismatch(
                    matroid.ground_size(),
                    elements.len(),
                ));
            }
            for (local, &e) in elements.iter().enumerate() {
                if claimed[e.0] {
                    return Err(MatroidError::Overlap(e));
                }
                claimed[e.0] = true;
                owner[e.0] = Some((idx, local));
            }
            parts.push(Component { matroid, elements });
        }
        Ok(DirectSumMatroid {
            ground,
            components: parts,
            owner,
        })
    }

    fn restrict(&self, set: &ElementSet, component: usize) -> ElementSet {
        set.iter()
            .filter_map(|e| match self.owner[e.0] {
                Some((c, local)) if c == component => Some(Element(local)),
                _ => None,
            })
            .collect()
    }
}

impl Matroid for DirectSumMatroid {
    fn ground_size(&self) -> usize {
        self.ground
    }

    fn is_independent(&self, set: &ElementSet) -> bool {
        (0..self.components.len()).all(|c| {
            let local = self.restrict(set, c);
            local.is_empty() || self.components[c].matroid.is_independent(&local)
        })
    }

    fn can_add(&self, set: &ElementSet, e: Element) -> bool {
        match self.owner[e.0] {
            None => true,
            Some((c, local)) => self.components[c]
                .matroid
                .can_add(&self.restrict(set, c), Element(local)),
        }
    }

    fn circuit(&self, indep: &ElementSet, e: Element) -> Option<ElementSet> {
        let (c, local) = self.owner[e.0]?;
        let part = &self.components[c];
        let circuit = part
            .matroid
            .circuit(&self.restrict(indep, c), Element(local))?;
        Some(circuit.iter().map(|l| part.elements[l.0]).collect())
    }
}

/// Builds a direct sum; see [`DirectSumMatroid::new`].
pub fn direct_sum(
    components: Vec<(Box<dyn Matroid>, Vec<Element>)>,
    free: &ElementSet,
) -> Result<DirectSumMatroid, MatroidError> {
    DirectSumMatroid::new(components, free)
}

/// Element names for a ground set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundSet {
    names: Vec<String>,
}

impl GroundSet {
    pub fn new(names: Vec<String>) -> Self {
        GroundSet { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e.0]
    }

    pub fn element(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name).map(Element)
    }

    /// Set of named elements; panics on unknown names. Test and example helper.
    pub fn set(&self, names: &[&str]) -> ElementSet {
        names
            .iter()
            .map(|n| {
                self.element(n)
                    .unwrap_or_else(|| panic!("unknown element `{n}`"))
            })
            .collect()
    }

    pub fn names_of(&self, set: &ElementSet) -> Vec<&str> {
        set.iter().map(|&e| self.name(e)).collect()
    }
}

/// Reads a matroid given by bases:
///
/// ```text
/// ground e1 e2 e3
/// basis e1 e2
/// basis e1 e3
/// ```
pub fn parse_explicit(text: &str) -> Result<(GroundSet, ExplicitMatroid), MatroidError> {
    let mut ground: Option<GroundSet> = None;
    let mut bases = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["ground", names @ ..] if ground.is_none() => {
                ground = Some(GroundSet::new(
                    names.iter().map(|s| s.to_string()).collect(),
                ));
            }
            ["basis", names @ ..] => {
                let g = ground.as_ref().ok_or_else(|| MatroidError::Parse {
                    line,
                    reason: "basis before ground line".into(),
                })?;
                let basis = names
                    .iter()
                    .map(|name| {
                        g.element(name).ok_or_else(|| MatroidError::Parse {
                            line,
                            reason: format!("unknown element `{name}`"),
                        })
                    })
                    .collect::<Result<ElementSet, _>>()?;
                bases.push(basis);
            }
            _ => {
                return Err(MatroidError::Parse {
                    line,
                    reason: format!("unexpected line `{}`", content.trim()),
                })
            }
        }
    }
    let ground = ground.ok_or(MatroidError::Parse {
        line: 0,
        reason: "missing ground line".into(),
    })?;
    let matroid = ExplicitMatroid::new(ground.len(), bases)?;
    Ok((ground, matroid))
}
