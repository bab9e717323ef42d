//! Reduction of k-matroid intersection to three-matroid intersection.
//!
//! Every original element `i` gets one copy `e_ij` per source matroid `j`
//! and one parity partner `a_ij` per copy. The three matroids are:
//!
//! * `m1`: source matroid `j` acting on the `j`-th copies, parity elements free;
//! * `m2`: pairs `{e_ij, a_ij}` with capacity 1;
//! * `m3`: pairs `{e_ij, a_i(j+1 mod k)}` with capacity 1.
//!
//! Per original element the `m2`/`m3` pairs form an even cycle, so a
//! size-`k` selection from one group is all copies or all partners. Lifting
//! every weight by a constant larger than the total original weight makes
//! maximum-weight solutions maximum-cardinality, hence parity-respecting.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matroid::{
    DirectSumMatroid, Element, ElementSet, Matroid, MatroidError, PartitionMatroid,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("no source matroids")]
    NoMatroids,
    #[error("empty ground set")]
    EmptyGround,
    #[error("source matroid {index} has ground size {found}, expected {expected}")]
    GroundMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("weights cover {found} elements, expected {expected}")]
    WeightCount { found: usize, expected: usize },
    #[error("selection is not independent in all three matroids")]
    NotIndependent,
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Copy,
    Parity,
}

#[derive(Debug)]
pub struct ReducedInstance {
    originals: usize,
    k: usize,
    m1: DirectSumMatroid,
    m2: PartitionMatroid,
    m3: PartitionMatroid,
    weights: Vec<f64>,
    lift: f64,
}

impl ReducedInstance {
    /// Number of original elements.
    pub fn originals(&self) -> usize {
        self.originals
    }

    /// Number of source matroids.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ground_size(&self) -> usize {
        2 * self.k * self.originals
    }

    /// Copy `e_ij` (`j` is 0-based).
    pub fn copy(&self, i: usize, j: usize) -> Element {
        Element(i * 2 * self.k + j)
    }

    /// Parity partner `a_ij` (`j` is 0-based).
    pub fn parity(&self, i: usize, j: usize) -> Element {
        Element(i * 2 * self.k + self.k + j)
    }

    /// `(original, copy index, slot)` of an element.
    pub fn locate(&self, e: Element) -> (usize, usize, Slot) {
        let (i, r) = (e.0 / (2 * self.k), e.0 % (2 * self.k));
        if r < self.k {
            (i, r, Slot::Copy)
        } else {
            (i, r - self.k, Slot::Parity)
        }
    }

    /// `<orig>#e<j>` / `<orig>#a<j>` with 1-based `j`.
    pub fn element_name(&self, e: Element, original_names: &[&str]) -> String {
        let (i, j, slot) = self.locate(e);
        let tag = match slot {
            Slot::Copy => 'e',
            Slot::Parity => 'a',
        };
        format!("{}#{}{}", original_names[i], tag, j + 1)
    }

    pub fn m1(&self) -> &DirectSumMatroid {
        &self.m1
    }

    pub fn m2(&self) -> &PartitionMatroid {
        &self.m2
    }

    pub fn m3(&self) -> &PartitionMatroid {
        &self.m3
    }

    pub fn matroids(&self) -> [&dyn Matroid; 3] {
        [&self.m1, &self.m2, &self.m3]
    }

    /// Lifted weights indexed by element.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The lifting constant `1 + Σ|w_i|`.
    pub fn lift(&self) -> f64 {
        self.lift
    }

    pub fn weight_of(&self, set: &ElementSet) -> f64 {
        set.iter().map(|e| self.weights[e.0]).sum()
    }

    pub fn is_common_independent(&self, set: &ElementSet) -> bool {
        self.matroids().iter().all(|m| m.is_independent(set))
    }
}

pub fn build_reduction(
    sources: Vec<Box<dyn Matroid>>,
    weights: &[f64],
) -> Result<ReducedInstance, ReductionError> {
    let k = sources.len();
    let originals = sources
        .first()
        .ok_or(ReductionError::NoMatroids)?
        .ground_size();
    if originals == 0 {
        return Err(ReductionError::EmptyGround);
    }
    for (index, m) in sources.iter().enumerate() {
        if m.ground_size() != originals {
            return Err(ReductionError::GroundMismatch {
                index,
                found: m.ground_size(),
                expected: originals,
            });
        }
    }
    if weights.len() != originals {
        return Err(ReductionError::WeightCount {
            found: weights.len(),
            expected: originals,
        });
    }

    let copy = |i: usize, j: usize| Element(i * 2 * k + j);
    let parity = |i: usize, j: usize| Element(i * 2 * k + k + j);

    let components = sources
        .into_iter()
        .enumerate()
        .map(|(j, m)| (m, (0..originals).map(|i| copy(i, j)).collect()))
        .collect();
    let free: ElementSet = (0..originals)
        .flat_map(|i| (0..k).map(move |j| parity(i, j)))
        .collect();
    let m1 = DirectSumMatroid::new(components, &free)?;

    let ground = 2 * k * originals;
    let pairs = |shift: usize| {
        (0..originals).flat_map(move |i| {
            (0..k).map(move |j| (vec![copy(i, j), parity(i, (j + shift) % k)], 1))
        })
    };
    let m2 = PartitionMatroid::new(ground, pairs(0))?;
    let m3 = PartitionMatroid::new(ground, pairs(1))?;

    let lift = 1.0 + weights.iter().map(|w| w.abs()).sum::<f64>();
    let mut lifted = vec![lift; ground];
    for (i, w) in weights.iter().enumerate() {
        lifted[copy(i, 0).0] = lift + w;
    }

    Ok(ReducedInstance {
        originals,
        k,
        m1,
        m2,
        m3,
        weights: lifted,
        lift,
    })
}

/// Originals whose every copy is selected. `selection` must be independent
/// in all three matroids.
pub fn extract_selection(
    inst: &ReducedInstance,
    selection: &ElementSet,
) -> Result<BTreeSet<usize>, ReductionError> {
    if selection.iter().any(|e| e.0 >= inst.ground_size()) || !inst.is_common_independent(selection)
    {
        return Err(ReductionError::NotIndependent);
    }
    Ok((0..inst.originals)
        .filter(|&i| (0..inst.k).all(|j| selection.contains(&inst.copy(i, j))))
        .collect())
}
