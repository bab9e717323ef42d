//! Ontology data model and the line-oriented text formats.
//!
//! An ontology is a list of weighted relation triples plus a set of
//! metadata rules. Three text formats are read here:
//!
//! ```text
//! # ontology file
//! r1 1 Jim isMemberOf man
//! r2 2.5 man isEquivalentTo male&person
//! meta isSubsetOf transitive
//! meta parentOf inverseOf childOf
//!
//! # sensitive facts file
//! A isSubsetOf E
//!
//! # minimal sets file
//! minset r1 r2 r3
//! ```
//!
//! A line whose first token is `meta` is always a metadata line, so `meta`
//! cannot be used as a relation id.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Error raised while reading any of the text formats. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed line: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate relation id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: relation `{id}` repeats the fact of relation `{first}`")]
    DuplicateFact {
        line: usize,
        id: String,
        first: String,
    },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: String },
    #[error("line {line}: unknown meta keyword `{keyword}`")]
    UnknownMeta { line: usize, keyword: String },
    #[error("line {line}: unknown relation id `{id}`")]
    UnknownId { line: usize, id: String },
    #[error("line {line}: empty minset")]
    EmptyMinset { line: usize },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Malformed { line, .. }
            | ParseError::DuplicateId { line, .. }
            | ParseError::DuplicateFact { line, .. }
            | ParseError::NegativeWeight { line, .. }
            | ParseError::UnknownMeta { line, .. }
            | ParseError::UnknownId { line, .. }
            | ParseError::EmptyMinset { line } => *line,
        }
    }
}

/// A name token: one or more of `[A-Za-z0-9_]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identifier(String);

impl Identifier {
    pub fn new(text: &str) -> Option<Self> {
        let valid =
            !text.is_empty() && text.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
        valid.then(|| Identifier(text.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Object of a triple: a single identifier or a conjunction of identifiers.
///
/// The operand list is kept as given; [`ObjectExpr::canonical`] sorts and
/// deduplicates it. Values produced by the parsers are always canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectExpr(Vec<Identifier>);

impl ObjectExpr {
    /// Builds an object from a non-empty operand list.
    pub fn new(operands: Vec<Identifier>) -> Option<Self> {
        (!operands.is_empty()).then_some(ObjectExpr(operands))
    }

    pub fn atom(id: Identifier) -> Self {
        ObjectExpr(vec![id])
    }

    /// Parses `a` or `a&b&c`. The result is canonical.
    pub fn parse(text: &str) -> Option<Self> {
        let operands = text
            .split('&')
            .map(Identifier::new)
            .collect::<Option<Vec<_>>>()?;
        ObjectExpr::new(operands).map(ObjectExpr::canonical)
    }

    pub fn canonical(mut self) -> Self {
        self.0.sort();
        self.0.dedup();
        self
    }

    pub fn operands(&self) -> &[Identifier] {
        &self.0
    }

    pub fn is_atomic(&self) -> bool {
        self.0.len() == 1
    }

    /// The single operand of an atomic object.
    pub fn as_atom(&self) -> Option<&Identifier> {
        match self.0.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }
}

impl fmt::Display for ObjectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, op) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("&")?;
            }
            f.write_str(op.as_str())?;
        }
        Ok(())
    }
}

/// A ground fact `subject property object`, without id or weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub subject: Identifier,
    pub property: Identifier,
    pub object: ObjectExpr,
}

impl Fact {
    pub fn new(subject: Identifier, property: Identifier, object: ObjectExpr) -> Self {
        Fact {
            subject,
            property,
            object,
        }
    }

    /// Parses `subject property object`; panics on invalid input. Test and example helper.
    pub fn parse(text: &str) -> Self {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        parse_fact_tokens(&tokens).unwrap_or_else(|reason| panic!("bad fact `{text}`: {reason}"))
    }

    pub fn canonical(self) -> Self {
        Fact {
            object: self.object.canonical(),
            ..self
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.property, self.object)
    }
}

/// A weighted, identified relation of the ontology.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    pub id: Identifier,
    pub weight: f64,
    pub subject: Identifier,
    pub property: Identifier,
    pub object: ObjectExpr,
}

impl Triple {
    /// Sorts and deduplicates the object operands; every other field is kept.
    pub fn canonicalize(self) -> Self {
        Triple {
            object: self.object.canonical(),
            ..self
        }
    }

    pub fn fact(&self) -> Fact {
        Fact::new(
            self.subject.clone(),
            self.property.clone(),
            self.object.clone(),
        )
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.id, self.weight, self.subject, self.property, self.object
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetadataRule {
    Transitive(Identifier),
    Symmetric(Identifier),
    InverseOf(Identifier, Identifier),
    SubPropertyOf(Identifier, Identifier),
}

impl fmt::Display for MetadataRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetadataRule::Transitive(p) => write!(f, "meta {p} transitive"),
            MetadataRule::Symmetric(p) => write!(f, "meta {p} symmetric"),
            MetadataRule::InverseOf(p, q) => write!(f, "meta {p} inverseOf {q}"),
            MetadataRule::SubPropertyOf(p, q) => write!(f, "meta {p} subPropertyOf {q}"),
        }
    }
}

/// Relations in file order plus metadata. Relation ids and relation facts
/// are both unique.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ontology {
    relations: Vec<Triple>,
    metadata: BTreeSet<MetadataRule>,
    index: HashMap<Identifier, usize>,
}

impl Ontology {
    /// Builds an ontology from already-valid parts, canonicalizing every relation.
    pub fn from_parts(
        relations: Vec<Triple>,
        metadata: impl IntoIterator<Item = MetadataRule>,
    ) -> Result<Self, ParseError> {
        let mut ontology = Ontology {
            metadata: metadata.into_iter().collect(),
            ..Ontology::default()
        };
        let mut facts: HashMap<Fact, usize> = HashMap::new();
        for (n, triple) in relations.into_iter().enumerate() {
            ontology.push(triple.canonicalize(), n + 1, &mut facts)?;
        }
        Ok(ontology)
    }

    fn push(
        &mut self,
        triple: Triple,
        line: usize,
        facts: &mut HashMap<Fact, usize>,
    ) -> Result<(), ParseError> {
        if !triple.weight.is_finite() || triple.weight < 0.0 {
            return Err(ParseError::NegativeWeight {
                line,
                weight: triple.weight.to_string(),
            });
        }
        if self.index.contains_key(&triple.id) {
            return Err(ParseError::DuplicateId {
                line,
                id: triple.id.to_string(),
            });
        }
        let pos = self.relations.len();
        if let Some(&first) = facts.get(&triple.fact()) {
            return Err(ParseError::DuplicateFact {
                line,
                id: triple.id.to_string(),
                first: self.relations[first].id.to_string(),
            });
        }
        facts.insert(triple.fact(), pos);
        self.index.insert(triple.id.clone(), pos);
        self.relations.push(triple);
        Ok(())
    }

    pub fn relations(&self) -> &[Triple] {
        &self.relations
    }

    pub fn metadata(&self) -> &BTreeSet<MetadataRule> {
        &self.metadata
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Position of a relation id in file order.
    pub fn position(&self, id: &str) -> Option<usize> {
        Identifier::new(id).and_then(|id| self.index.get(&id).copied())
    }

    pub fn relation(&self, pos: usize) -> &Triple {
        &self.relations[pos]
    }

    /// Every identifier appearing as a subject or object operand.
    pub fn individuals(&self) -> BTreeSet<Identifier> {
        self.relations
            .iter()
            .flat_map(|t| std::iter::once(&t.subject).chain(t.object.operands()))
            .cloned()
            .collect()
    }

    /// Relation ids for a set of positions, in file order.
    pub fn ids<'a>(&'a self, positions: impl IntoIterator<Item = &'a usize>) -> Vec<&'a str> {
        let mut sorted: Vec<usize> = positions.into_iter().copied().collect();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
            .into_iter()
            .map(|p| self.relations[p].id.as_str())
            .collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.relations.iter().map(|t| t.weight).sum()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.relations.iter().map(|t| t.weight).collect()
    }

    /// Writes relations in original order, then metadata sorted by line text.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for triple in &self.relations {
            out.push_str(&triple.to_string());
            out.push('\n');
        }
        let mut meta: Vec<String> = self.metadata.iter().map(|m| m.to_string()).collect();
        meta.sort();
        for line in meta {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Strips a `#` comment and splits the remainder into tokens.
fn tokens(line: &str) -> Vec<&str> {
    let content = match line.find('#') {
        Some(cut) => &line[..cut],
        None => line,
    };
    content.split_whitespace().collect()
}

fn ident(token: &str, line: usize) -> Result<Identifier, ParseError> {
    Identifier::new(token).ok_or_else(|| ParseError::Malformed {
        line,
        reason: format!("invalid identifier `{token}`"),
    })
}

fn parse_fact_tokens(tokens: &[&str]) -> Result<Fact, String> {
    let [subject, property, object] = tokens else {
        return Err(format!("expected 3 fields, found {}", tokens.len()));
    };
    let subject = Identifier::new(subject).ok_or(format!("invalid identifier `{subject}`"))?;
    let property = Identifier::new(property).ok_or(format!("invalid identifier `{property}`"))?;
    let object = ObjectExpr::parse(object).ok_or(format!("invalid object `{object}`"))?;
    Ok(Fact::new(subject, property, object))
}

pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    let mut ontology = Ontology::default();
    let mut facts = HashMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let toks = tokens(raw);
        match toks.as_slice() {
            [] => {}
            ["meta", rest @ ..] => {
                let rule = parse_meta(rest, line)?;
                ontology.metadata.insert(rule);
            }
            [id, weight, subject, property, object] => {
                let weight_value: f64 = weight.parse().map_err(|_| ParseError::Malformed {
                    line,
                    reason: format!("invalid weight `{weight}`"),
                })?;
                if !weight_value.is_finite() {
                    return Err(ParseError::Malformed {
                        line,
                        reason: format!("invalid weight `{weight}`"),
                    });
                }
                if weight_value < 0.0 {
                    return Err(ParseError::NegativeWeight {
                        line,
                        weight: weight.to_string(),
                    });
                }
                let object = ObjectExpr::parse(object).ok_or_else(|| ParseError::Malformed {
                    line,
                    reason: format!("invalid object `{object}`"),
                })?;
                let triple = Triple {
                    id: ident(id, line)?,
                    weight: weight_value,
                    subject: ident(subject, line)?,
                    property: ident(property, line)?,
                    object,
                };
                ontology.push(triple, line, &mut facts)?;
            }
            other => {
                return Err(ParseError::Malformed {
                    line,
                    reason: format!("expected 5 fields, found {}", other.len()),
                })
            }
        }
    }
    Ok(ontology)
}

fn parse_meta(rest: &[&str], line: usize) -> Result<MetadataRule, ParseError> {
    let distinct = |p: Identifier, q: Identifier| {
        if p == q {
            Err(ParseError::Malformed {
                line,
                reason: format!("metadata relates `{p}` to itself"),
            })
        } else {
            Ok((p, q))
        }
    };
    match rest {
        [p, "transitive"] => Ok(MetadataRule::Transitive(ident(p, line)?)),
        [p, "symmetric"] => Ok(MetadataRule::Symmetric(ident(p, line)?)),
        [p, "inverseOf", q] => {
            let (p, q) = distinct(ident(p, line)?, ident(q, line)?)?;
            Ok(MetadataRule::InverseOf(p, q))
        }
        [p, "subPropertyOf", q] => {
            let (p, q) = distinct(ident(p, line)?, ident(q, line)?)?;
            Ok(MetadataRule::SubPropertyOf(p, q))
        }
        [_, keyword, ..] => Err(ParseError::UnknownMeta {
            line,
            keyword: keyword.to_string(),
        }),
        _ => Err(ParseError::Malformed {
            line,
            reason: "meta line needs a property and a keyword".to_string(),
        }),
    }
}

/// Facts that must not be derivable from a published sub-ontology.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SensitiveSpec {
    pub facts: BTreeSet<Fact>,
}

pub fn parse_sensitive(text: &str) -> Result<SensitiveSpec, ParseError> {
    let mut facts = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        let fact = parse_fact_tokens(&toks).map_err(|reason| ParseError::Malformed {
            line: n + 1,
            reason,
        })?;
        facts.insert(fact);
    }
    Ok(SensitiveSpec { facts })
}

/// An antichain of relation sets, stored as relation positions in file order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MinsetFamily {
    sets: Vec<BTreeSet<usize>>,
}

impl MinsetFamily {
    /// Minimizes the given sets: subset-dominated members and duplicates are dropped.
    /// Empty sets are kept (an empty set dominates everything).
    pub fn new(sets: impl IntoIterator<Item = BTreeSet<usize>>) -> Self {
        let mut family = MinsetFamily::default();
        for set in sets {
            family.insert(set);
        }
        family
    }

    /// Adds a set unless an existing member is a subset of it; drops members
    /// that are supersets of it. Returns whether the family changed.
    pub fn insert(&mut self, set: BTreeSet<usize>) -> bool {
        if self.sets.iter().any(|s| s.is_subset(&set)) {
            return false;
        }
        self.sets.retain(|s| !set.is_subset(s));
        let at = self.sets.partition_point(|s| s < &set);
        self.sets.insert(at, set);
        true
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// True when some member is contained in `kept`.
    pub fn violated_by(&self, kept: &BTreeSet<usize>) -> bool {
        self.sets.iter().any(|s| s.is_subset(kept))
    }

    pub fn merge(&mut self, other: &MinsetFamily) {
        for set in &other.sets {
            self.insert(set.clone());
        }
    }

    /// One `minset` line per member, ids in file order.
    pub fn to_text(&self, ontology: &Ontology) -> String {
        let mut out = String::new();
        for set in &self.sets {
            out.push_str("minset ");
            out.push_str(&ontology.ids(set).join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn parse_minsets(text: &str, ontology: &Ontology) -> Result<MinsetFamily, ParseError> {
    let mut family = MinsetFamily::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        match tokens(raw).as_slice() {
            [] => {}
            ["minset"] => return Err(ParseError::EmptyMinset { line }),
            ["minset", ids @ ..] => {
                let mut set = BTreeSet::new();
                for id in ids {
                    let pos = ontology.position(id).ok_or_else(|| ParseError::UnknownId {
                        line,
                        id: id.to_string(),
                    })?;
                    set.insert(pos);
                }
                family.insert(set);
            }
            [other, ..] => {
                return Err(ParseError::Malformed {
                    line,
                    reason: format!("expected `minset`, found `{other}`"),
                })
            }
        }
    }
    Ok(family)
}
