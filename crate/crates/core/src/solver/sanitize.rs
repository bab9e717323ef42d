use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::three::solve_three;
use super::{SolveParams, SolverError};
use crate::matroid::{forbidden_set_matroid, Element, Matroid};
use crate::ontology::{MinsetFamily, Ontology};
use crate::oracle::{exact_hitting_set, HittingSetInstance};
use crate::reduction::{build_reduction, extract_selection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Greedy,
    #[default]
    Augment,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Greedy => "greedy",
            Method::Augment => "augment",
            Method::Oracle => "oracle",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Method::Greedy),
            "augment" => Ok(Method::Augment),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SanitizeResult {
    /// Kept relation positions.
    pub kept: BTreeSet<usize>,
    pub removed: BTreeSet<usize>,
    pub weight: f64,
    pub method: Method,
    /// Whether the kept set is known to be of maximum weight.
    pub optimal: bool,
}

/// Heaviest relation subset containing no member of `minsets`.
pub fn sanitize(
    ontology: &Ontology,
    minsets: &MinsetFamily,
    method: Method,
    params: &SolveParams,
) -> Result<SanitizeResult, SolverError> {
    sanitize_weights(&ontology.weights(), minsets, method, params)
}

/// Like [`sanitize`], also rendering the final border graph of the
/// augment method as `<from> <to> type<k>` lines.
pub fn sanitize_traced(
    ontology: &Ontology,
    minsets: &MinsetFamily,
    method: Method,
    params: &SolveParams,
) -> Result<(SanitizeResult, Option<String>), SolverError> {
    let ids: Vec<&str> = ontology.relations().iter().map(|t| t.id.as_str()).collect();
    run(&ontology.weights(), minsets, method, params, Some(&ids))
}

/// [`sanitize`] over bare weights indexed by relation position.
pub fn sanitize_weights(
    weights: &[f64],
    minsets: &MinsetFamily,
    method: Method,
    params: &SolveParams,
) -> Result<SanitizeResult, SolverError> {
    run(weights, minsets, method, params, None).map(|(r, _)| r)
}

fn run(
    weights: &[f64],
    minsets: &MinsetFamily,
    method: Method,
    params: &SolveParams,
    names: Option<&[&str]>,
) -> Result<(SanitizeResult, Option<String>), SolverError> {
    let n = weights.len();
    for set in minsets.sets() {
        if set.is_empty() {
            return Err(SolverError::EmptyMinset);
        }
        if let Some(&p) = set.iter().find(|&&p| p >= n) {
            return Err(SolverError::UnknownRelation(p));
        }
    }
    let finish = |kept: BTreeSet<usize>, optimal: bool| {
        let weight = kept.iter().map(|&i| weights[i]).sum();
        SanitizeResult {
            removed: (0..n).filter(|i| !kept.contains(i)).collect(),
            kept,
            weight,
            method,
            optimal,
        }
    };
    if minsets.is_empty() {
        return Ok((finish((0..n).collect(), true), None));
    }

    let order = weight_order(weights);
    let mut trace = None;
    let (kept, optimal) = match method {
        Method::Greedy => {
            let mut kept = BTreeSet::new();
            fill(&mut kept, &order, minsets, None);
            (kept, false)
        }
        Method::Oracle => {
            let hit = exact_hitting_set(&HittingSetInstance {
                family: minsets,
                weights,
            })?;
            let mut kept: BTreeSet<usize> = (0..n).filter(|i| !hit.contains(i)).collect();
            fill(&mut kept, &order, minsets, None);
            (kept, true)
        }
        Method::Augment => {
            let (mut kept, dump) = augment(weights, minsets, params, names)?;
            trace = dump;
            fill(&mut kept, &order, minsets, None);
            improve_by_swaps(&mut kept, weights, &order, minsets);
            // Never return less than the greedy answer.
            let mut greedy = BTreeSet::new();
            fill(&mut greedy, &order, minsets, None);
            improve_by_swaps(&mut greedy, weights, &order, minsets);
            let total = |s: &BTreeSet<usize>| s.iter().map(|&i| weights[i]).sum::<f64>();
            if total(&greedy) > total(&kept) {
                kept = greedy;
            }
            (kept, false)
        }
    };
    debug_assert!(!minsets.violated_by(&kept));
    Ok((finish(kept, optimal), trace))
}

fn weight_order(weights: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    order
}

/// Adds relations in `order` whenever no minset becomes fully kept.
fn fill(kept: &mut BTreeSet<usize>, order: &[usize], minsets: &MinsetFamily, skip: Option<usize>) {
    for &i in order {
        if Some(i) == skip || kept.contains(&i) {
            continue;
        }
        kept.insert(i);
        if minsets.violated_by(kept) {
            kept.remove(&i);
        }
    }
}

/// Drop one kept relation and refill greedily without it; keep the change
/// when the total weight strictly grows. Repeats until no drop helps.
fn improve_by_swaps(
    kept: &mut BTreeSet<usize>,
    weights: &[f64],
    order: &[usize],
    minsets: &MinsetFamily,
) {
    let total = |s: &BTreeSet<usize>| s.iter().map(|&i| weights[i]).sum::<f64>();
    'outer: loop {
        let base = total(kept);
        for &r in kept.iter() {
            let mut trial = kept.clone();
            trial.remove(&r);
            fill(&mut trial, order, minsets, Some(r));
            if total(&trial) > base + 1e-9 * (1.0 + base.abs()) {
                *kept = trial;
                continue 'outer;
            }
        }
        return;
    }
}

/// One forbidden-set matroid per minset, reduced to three matroids and
/// solved by augmenting trees. Relations outside every minset are kept
/// without entering the reduction.
fn augment(
    weights: &[f64],
    minsets: &MinsetFamily,
    params: &SolveParams,
    names: Option<&[&str]>,
) -> Result<(BTreeSet<usize>, Option<String>), SolverError> {
    let constrained: Vec<usize> = minsets
        .sets()
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let local = |p: usize| Element(constrained.binary_search(&p).expect("constrained position"));
    let m = constrained.len();
    let sources = minsets
        .sets()
        .iter()
        .map(|s| {
            let forbidden = s.iter().map(|&p| local(p)).collect();
            forbidden_set_matroid(&forbidden, m).map(|fm| Box::new(fm) as Box<dyn Matroid>)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let local_weights: Vec<f64> = constrained.iter().map(|&p| weights[p]).collect();
    let inst = build_reduction(sources, &local_weights)?;
    let solution = solve_three(&inst, params)?;
    let chosen = extract_selection(&inst, &solution.selection)?;

    let mut kept: BTreeSet<usize> = (0..weights.len())
        .filter(|p| constrained.binary_search(p).is_err())
        .collect();
    kept.extend(chosen.into_iter().map(|i| constrained[i]));

    let dump = names.map(|ids| {
        let local_ids: Vec<&str> = constrained.iter().map(|&p| ids[p]).collect();
        solution
            .final_graph
            .dump(|e| inst.element_name(e, &local_ids))
    });
    Ok((kept, dump))
}
