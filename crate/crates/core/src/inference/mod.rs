//! Horn-rule reasoning over an ontology: rule compilation, closures,
//! safety checks and minimal support sets.

mod closure;
mod reach;
mod rules;
mod support;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use closure::closure;
pub use reach::reachability_closure;
pub use rules::{
    compile_rules, possible_properties, AtomPattern, GuardedHornRule, Term, IS_A, IS_EQUIVALENT_TO,
    IS_SUBSET_OF,
};

use crate::ontology::{Fact, MinsetFamily, Ontology, SensitiveSpec};

/// Default bound on the number of minimal sets kept per fact.
pub const DEFAULT_SUPPORT_CAP: usize = 10_000;

pub type FactSet = BTreeSet<Fact>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("cap exceeded: more than {cap} minimal sets for `{fact}`")]
    CapExceeded { fact: String, cap: usize },
    #[error("not a reachability instance: {reason}")]
    NotReachable { reason: String },
}

/// The offending fact and a minimal set of published relations deriving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub fact: Fact,
    pub support: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyReport {
    pub witness: Option<Witness>,
}

impl SafetyReport {
    pub fn is_safe(&self) -> bool {
        self.witness.is_none()
    }
}

/// An ontology together with its compiled rules.
#[derive(Debug, Clone)]
pub struct Reasoner<'o> {
    ontology: &'o Ontology,
    rules: Vec<GuardedHornRule>,
}

impl<'o> Reasoner<'o> {
    pub fn new(ontology: &'o Ontology) -> Self {
        Reasoner {
            ontology,
            rules: compile_rules(ontology),
        }
    }

    pub fn ontology(&self) -> &'o Ontology {
        self.ontology
    }

    pub fn rules(&self) -> &[GuardedHornRule] {
        &self.rules
    }

    /// Relation positions for the given ids.
    pub fn positions<S: AsRef<str>>(&self, ids: &[S]) -> Result<BTreeSet<usize>, InferenceError> {
        ids.iter()
            .map(|id| {
                self.ontology
                    .position(id.as_ref())
                    .ok_or_else(|| InferenceError::UnknownRelation(id.as_ref().to_string()))
            })
            .collect()
    }

    fn check(&self, q: &BTreeSet<usize>) -> Result<(), InferenceError> {
        match q.iter().find(|&&p| p >= self.ontology.len()) {
            Some(p) => Err(InferenceError::UnknownRelation(format!("#{p}"))),
            None => Ok(()),
        }
    }

    /// Closure of the sub-ontology `q` (relation positions).
    pub fn closure_of(&self, q: &BTreeSet<usize>) -> FactSet {
        let base = q
            .iter()
            .map(|&p| self.ontology.relation(p).fact())
            .collect();
        closure(&base, &self.rules, q)
    }

    pub fn full_closure(&self) -> FactSet {
        self.closure_of(&(0..self.ontology.len()).collect())
    }

    /// `q` is safe when its closure contains no sensitive fact. An unsafe
    /// report carries the smallest offending fact and a minimal subset of `q`
    /// deriving it, found by dropping relations in file order.
    pub fn is_safe(
        &self,
        q: &BTreeSet<usize>,
        sensitive: &SensitiveSpec,
    ) -> Result<SafetyReport, InferenceError> {
        self.check(q)?;
        let derived = self.closure_of(q);
        let Some(fact) = sensitive.facts.iter().find(|f| derived.contains(f)) else {
            return Ok(SafetyReport { witness: None });
        };
        let mut support = q.clone();
        for &pos in q {
            support.remove(&pos);
            if !self.closure_of(&support).contains(fact) {
                support.insert(pos);
            }
        }
        Ok(SafetyReport {
            witness: Some(Witness {
                fact: fact.clone(),
                support,
            }),
        })
    }

    /// Complete antichain of minimal relation sets per sensitive fact;
    /// underivable facts map to an empty family.
    pub fn support_sets(
        &self,
        sensitive: &SensitiveSpec,
        cap: usize,
    ) -> Result<BTreeMap<Fact, MinsetFamily>, InferenceError> {
        let families = support::support_families(self.ontology, &self.rules, cap)?;
        Ok(sensitive
            .facts
            .iter()
            .map(|f| (f.clone(), families.get(f).cloned().unwrap_or_default()))
            .collect())
    }
}

pub fn is_safe(
    q: &BTreeSet<usize>,
    ontology: &Ontology,
    sensitive: &SensitiveSpec,
) -> Result<SafetyReport, InferenceError> {
    Reasoner::new(ontology).is_safe(q, sensitive)
}

pub fn minimal_support_sets(
    ontology: &Ontology,
    sensitive: &SensitiveSpec,
    cap: usize,
) -> Result<BTreeMap<Fact, MinsetFamily>, InferenceError> {
    Reasoner::new(ontology).support_sets(sensitive, cap)
}

/// Union of all per-fact families, minimized.
pub fn combined_minsets(per_fact: &BTreeMap<Fact, MinsetFamily>) -> MinsetFamily {
    let mut all = MinsetFamily::default();
    for family in per_fact.values() {
        all.merge(family);
    }
    all
}
