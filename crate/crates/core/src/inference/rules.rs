use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::ontology::{Fact, Identifier, MetadataRule, ObjectExpr, Ontology};

pub const IS_A: &str = "isA";
pub const IS_SUBSET_OF: &str = "isSubsetOf";
pub const IS_EQUIVALENT_TO: &str = "isEquivalentTo";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(u8),
    Const(Identifier),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v @ 0..=2) => write!(f, "?{}", ["x", "y", "z"][*v as usize]),
            Term::Var(v) => write!(f, "?v{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// A body or head atom. A lone variable in object position binds the whole
/// object (atomic or conjunctive); a variable in subject position binds a
/// single identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomPattern {
    pub subject: Term,
    pub property: Identifier,
    pub object: Vec<Term>,
}

impl AtomPattern {
    pub fn new(subject: Term, property: &Identifier, object: Vec<Term>) -> Self {
        AtomPattern {
            subject,
            property: property.clone(),
            object,
        }
    }

    fn vars(&self) -> impl Iterator<Item = u8> + '_ {
        std::iter::once(&self.subject)
            .chain(&self.object)
            .filter_map(|t| match t {
                Term::Var(v) => Some(*v),
                Term::Const(_) => None,
            })
    }
}

impl fmt::Display for AtomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, ", self.property, self.subject)?;
        for (i, t) in self.object.iter().enumerate() {
            if i > 0 {
                f.write_str("&")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// A Horn rule, optionally licensed by the presence of one relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedHornRule {
    pub body: Vec<AtomPattern>,
    pub head: AtomPattern,
    /// Position of the relation whose presence enables the rule.
    pub guard: Option<usize>,
}

impl GuardedHornRule {
    /// Returns `None` when the body is empty or a head variable is unbound by the body.
    pub fn new(body: Vec<AtomPattern>, head: AtomPattern, guard: Option<usize>) -> Option<Self> {
        let bound: BTreeSet<u8> = body.iter().flat_map(AtomPattern::vars).collect();
        let ok = !body.is_empty() && head.vars().all(|v| bound.contains(&v));
        ok.then_some(GuardedHornRule { body, head, guard })
    }

    pub(crate) fn var_count(&self) -> usize {
        self.body
            .iter()
            .flat_map(AtomPattern::vars)
            .chain(self.head.vars())
            .map(|v| v as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn is_enabled(&self, guards: &BTreeSet<usize>) -> bool {
        self.guard.is_none_or(|g| guards.contains(&g))
    }
}

impl fmt::Display for GuardedHornRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, " → {}", self.head)?;
        if let Some(g) = self.guard {
            write!(f, " [guard #{g}]")?;
        }
        Ok(())
    }
}

pub(crate) type Binding = Vec<Option<ObjectExpr>>;

/// Extends `binding` so that `pattern` matches `fact`.
pub(crate) fn unify(pattern: &AtomPattern, fact: &Fact, binding: &Binding) -> Option<Binding> {
    if pattern.property != fact.property {
        return None;
    }
    let mut out = binding.clone();
    match &pattern.subject {
        Term::Const(c) if *c != fact.subject => return None,
        Term::Const(_) => {}
        Term::Var(v) => {
            let value = ObjectExpr::atom(fact.subject.clone());
            match &out[*v as usize] {
                Some(bound) if *bound != value => return None,
                Some(_) => {}
                None => out[*v as usize] = Some(value),
            }
        }
    }
    match pattern.object.as_slice() {
        [Term::Var(v)] => match &out[*v as usize] {
            Some(bound) if *bound != fact.object => return None,
            Some(_) => {}
            None => out[*v as usize] = Some(fact.object.clone()),
        },
        terms => {
            if instantiate_object(terms, &out)? != fact.object {
                return None;
            }
        }
    }
    Some(out)
}

fn instantiate_object(terms: &[Term], binding: &Binding) -> Option<ObjectExpr> {
    let mut operands = Vec::new();
    for term in terms {
        match term {
            Term::Const(c) => operands.push(c.clone()),
            Term::Var(v) => operands.extend_from_slice(binding[*v as usize].as_ref()?.operands()),
        }
    }
    ObjectExpr::new(operands).map(ObjectExpr::canonical)
}

/// Builds the head fact; `None` when a subject variable is bound to a conjunction.
pub(crate) fn instantiate(pattern: &AtomPattern, binding: &Binding) -> Option<Fact> {
    let subject = match &pattern.subject {
        Term::Const(c) => c.clone(),
        Term::Var(v) => binding[*v as usize].as_ref()?.as_atom()?.clone(),
    };
    let object = instantiate_object(&pattern.object, binding)?;
    Some(Fact::new(subject, pattern.property.clone(), object))
}

/// Facts grouped by property, for joins.
#[derive(Debug, Default)]
pub(crate) struct FactIndex<'a> {
    by_property: HashMap<&'a Identifier, Vec<&'a Fact>>,
}

impl<'a> FactIndex<'a> {
    pub fn new(facts: impl IntoIterator<Item = &'a Fact>) -> Self {
        let mut index = FactIndex::default();
        for fact in facts {
            index.insert(fact);
        }
        index
    }

    pub fn insert(&mut self, fact: &'a Fact) {
        self.by_property
            .entry(&fact.property)
            .or_default()
            .push(fact);
    }

    fn with_property(&self, property: &Identifier) -> &[&'a Fact] {
        self.by_property
            .get(property)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Enumerates every match of `rule`'s body where atom `seed_at` is matched
/// by `seed`; the remaining atoms are matched against `index`. The callback
/// receives the head fact and the matched body facts in body order.
pub(crate) fn matches_with_seed<'a>(
    rule: &GuardedHornRule,
    seed_at: usize,
    seed: &'a Fact,
    index: &FactIndex<'a>,
    mut emit: impl FnMut(Fact, &[&'a Fact]),
) {
    let start = vec![None; rule.var_count()];
    let Some(binding) = unify(&rule.body[seed_at], seed, &start) else {
        return;
    };
    let mut chosen: Vec<&'a Fact> = vec![seed; rule.body.len()];
    join(rule, 0, seed_at, &binding, index, &mut chosen, &mut emit);
}

fn join<'a>(
    rule: &GuardedHornRule,
    at: usize,
    seed_at: usize,
    binding: &Binding,
    index: &FactIndex<'a>,
    chosen: &mut Vec<&'a Fact>,
    emit: &mut impl FnMut(Fact, &[&'a Fact]),
) {
    if at == rule.body.len() {
        if let Some(head) = instantiate(&rule.head, binding) {
            emit(head, chosen);
        }
        return;
    }
    if at == seed_at {
        join(rule, at + 1, seed_at, binding, index, chosen, emit);
        return;
    }
    let atom = &rule.body[at];
    for &fact in index.with_property(&atom.property) {
        if let Some(next) = unify(atom, fact, binding) {
            chosen[at] = fact;
            join(rule, at + 1, seed_at, &next, index, chosen, emit);
        }
    }
}

/// Properties that can occur in any closure of the ontology.
pub fn possible_properties(ontology: &Ontology) -> BTreeSet<Identifier> {
    let mut props: BTreeSet<Identifier> = ontology
        .relations()
        .iter()
        .map(|t| t.property.clone())
        .collect();
    let conj_class = ontology.relations().iter().any(|t| {
        !t.object.is_atomic() && matches!(t.property.as_str(), IS_EQUIVALENT_TO | IS_SUBSET_OF)
    });
    if conj_class {
        props.insert(builtin(IS_SUBSET_OF));
    }
    loop {
        let before = props.len();
        for meta in ontology.metadata() {
            match meta {
                MetadataRule::SubPropertyOf(p, q) if props.contains(p) => {
                    props.insert(q.clone());
                }
                MetadataRule::InverseOf(p, q) if props.contains(p) || props.contains(q) => {
                    props.insert(p.clone());
                    props.insert(q.clone());
                }
                _ => {}
            }
        }
        if props.len() == before {
            return props;
        }
    }
}

fn builtin(name: &str) -> Identifier {
    Identifier::new(name).expect("builtin names are valid identifiers")
}

/// Compiles metadata, conjunctive class definitions and the builtin
/// membership bridges into rules.
///
/// Metadata rules and bridges carry no guard. Rules derived from a
/// conjunctive `isEquivalentTo` / `isSubsetOf` relation are guarded by that
/// relation's position.
pub fn compile_rules(ontology: &Ontology) -> Vec<GuardedHornRule> {
    use Term::{Const, Var};
    let (x, y, z) = (Var(0), Var(1), Var(2));
    let mut rules = Vec::new();
    let mut push = |body, head, guard| {
        rules.push(
            GuardedHornRule::new(body, head, guard).expect("compiled rules are range-restricted"),
        );
    };

    for meta in ontology.metadata() {
        match meta {
            MetadataRule::Transitive(p) => push(
                vec![
                    AtomPattern::new(x.clone(), p, vec![y.clone()]),
                    AtomPattern::new(y.clone(), p, vec![z.clone()]),
                ],
                AtomPattern::new(x.clone(), p, vec![z.clone()]),
                None,
            ),
            MetadataRule::Symmetric(p) => push(
                vec![AtomPattern::new(x.clone(), p, vec![y.clone()])],
                AtomPattern::new(y.clone(), p, vec![x.clone()]),
                None,
            ),
            MetadataRule::InverseOf(p, q) => {
                push(
                    vec![AtomPattern::new(x.clone(), p, vec![y.clone()])],
                    AtomPattern::new(y.clone(), q, vec![x.clone()]),
                    None,
                );
                push(
                    vec![AtomPattern::new(x.clone(), q, vec![y.clone()])],
                    AtomPattern::new(y.clone(), p, vec![x.clone()]),
                    None,
                );
            }
            MetadataRule::SubPropertyOf(p, q) => push(
                vec![AtomPattern::new(x.clone(), p, vec![y.clone()])],
                AtomPattern::new(x.clone(), q, vec![y.clone()]),
                None,
            ),
        }
    }

    let props = possible_properties(ontology);
    let is_a = builtin(IS_A);
    let subset = builtin(IS_SUBSET_OF);
    let equiv = builtin(IS_EQUIVALENT_TO);
    let has_is_a = props.contains(&is_a);

    for (pos, t) in ontology.relations().iter().enumerate() {
        if t.object.is_atomic() {
            continue;
        }
        let own = AtomPattern::new(
            Const(t.subject.clone()),
            &t.property,
            t.object.operands().iter().cloned().map(Const).collect(),
        );
        let class = Const(t.subject.clone());
        let parts = t.object.operands();
        if t.property == equiv || t.property == subset {
            for part in parts {
                push(
                    vec![own.clone()],
                    AtomPattern::new(class.clone(), &subset, vec![Const(part.clone())]),
                    Some(pos),
                );
            }
        }
        if t.property != equiv {
            continue;
        }
        push(
            parts
                .iter()
                .map(|b| AtomPattern::new(x.clone(), &subset, vec![Const(b.clone())]))
                .collect(),
            AtomPattern::new(x.clone(), &subset, vec![class.clone()]),
            Some(pos),
        );
        if has_is_a {
            push(
                parts
                    .iter()
                    .map(|b| AtomPattern::new(x.clone(), &is_a, vec![Const(b.clone())]))
                    .collect(),
                AtomPattern::new(x.clone(), &is_a, vec![class.clone()]),
                Some(pos),
            );
            for part in parts {
                push(
                    vec![AtomPattern::new(x.clone(), &is_a, vec![class.clone()])],
                    AtomPattern::new(x.clone(), &is_a, vec![Const(part.clone())]),
                    Some(pos),
                );
            }
        }
    }

    if has_is_a && props.contains(&subset) {
        push(
            vec![
                AtomPattern::new(x.clone(), &is_a, vec![y.clone()]),
                AtomPattern::new(y.clone(), &subset, vec![z.clone()]),
            ],
            AtomPattern::new(x.clone(), &is_a, vec![z.clone()]),
            None,
        );
    }
    if has_is_a && props.contains(&equiv) {
        push(
            vec![
                AtomPattern::new(x.clone(), &is_a, vec![y.clone()]),
                AtomPattern::new(y.clone(), &equiv, vec![z.clone()]),
            ],
            AtomPattern::new(x.clone(), &is_a, vec![z.clone()]),
            None,
        );
        push(
            vec![
                AtomPattern::new(x.clone(), &is_a, vec![z.clone()]),
                AtomPattern::new(y.clone(), &equiv, vec![z.clone()]),
            ],
            AtomPattern::new(x.clone(), &is_a, vec![y.clone()]),
            None,
        );
    }
    rules
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::parse_ontology;

    #[test]
    fn transitive_metadata_compiles_unguarded() {
        let o = parse_ontology("meta ancestorOf transitive").unwrap();
        let rules = compile_rules(&o);
        assert_eq!(rules.len(), 1);
        assert_eq!(
            rules[0].to_string(),
            "ancestorOf(?x, ?y) ∧ ancestorOf(?y, ?z) → ancestorOf(?x, ?z)"
        );
        assert_eq!(rules[0].guard, None);
    }

    #[test]
    fn conjunctive_equivalence_is_guarded() {
        let o = parse_ontology("r1 1 A isEquivalentTo B&C").unwrap();
        let rules = compile_rules(&o);
        let text: Vec<String> = rules.iter().map(ToString::to_string).collect();
        assert_eq!(
            text,
            vec![
                "isEquivalentTo(A, B&C) → isSubsetOf(A, B) [guard #0]",
                "isEquivalentTo(A, B&C) → isSubsetOf(A, C) [guard #0]",
                "isSubsetOf(?x, B) ∧ isSubsetOf(?x, C) → isSubsetOf(?x, A) [guard #0]",
            ]
        );
        assert!(rules.iter().all(|r| r.guard == Some(0)));
    }

    #[test]
    fn conjunctive_subset_is_one_directional() {
        let o = parse_ontology("r1 1 A isSubsetOf B&C\nr2 1 x isA A").unwrap();
        let text: Vec<String> = compile_rules(&o).iter().map(ToString::to_string).collect();
        assert_eq!(
            text,
            vec![
                "isSubsetOf(A, B&C) → isSubsetOf(A, B) [guard #0]",
                "isSubsetOf(A, B&C) → isSubsetOf(A, C) [guard #0]",
                "isA(?x, ?y) ∧ isSubsetOf(?y, ?z) → isA(?x, ?z)",
            ]
        );
    }

    #[test]
    fn atomic_ontology_without_builtins_has_no_rules() {
        let o = parse_ontology("r1 1 a p b\nr2 1 b q c").unwrap();
        assert!(compile_rules(&o).is_empty());
        assert!(compile_rules(&parse_ontology("").unwrap()).is_empty());
    }

    #[test]
    fn bridges_only_for_present_properties() {
        let o = parse_ontology("r1 1 x isA C\nr2 1 C isEquivalentTo D").unwrap();
        let rules = compile_rules(&o);
        assert_eq!(rules.len(), 2);
        let o =
            parse_ontology("r1 1 x isA C\nr2 1 C partOf D\nmeta partOf subPropertyOf isSubsetOf")
                .unwrap();
        assert_eq!(compile_rules(&o).len(), 2);
    }

    #[test]
    fn rule_rejects_unbound_head_variable() {
        let p = Identifier::new("p").unwrap();
        let rule = GuardedHornRule::new(
            vec![AtomPattern::new(Term::Var(0), &p, vec![Term::Var(1)])],
            AtomPattern::new(Term::Var(0), &p, vec![Term::Var(2)]),
            None,
        );
        assert!(rule.is_none());
        assert!(GuardedHornRule::new(
            vec![],
            AtomPattern::new(Term::Const(p.clone()), &p, vec![Term::Const(p.clone())]),
            None
        )
        .is_none());
    }

    #[test]
    fn subject_variable_never_binds_conjunction() {
        let o = parse_ontology("r1 1 A isEquivalentTo B&C\nmeta isEquivalentTo symmetric").unwrap();
        let rules = compile_rules(&o);
        let sym = rules.iter().find(|r| r.guard.is_none()).unwrap();
        let fact = o.relation(0).fact();
        let binding = unify(&sym.body[0], &fact, &vec![None; sym.var_count()]).unwrap();
        assert_eq!(instantiate(&sym.head, &binding), None);
    }
}
