use std::collections::BTreeSet;

use crate::graph::{Iri, Term};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum QueryTerm {
    Var(String),
    Const(Term),
}

impl QueryTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            QueryTerm::Var(v) => Some(v),
            QueryTerm::Const(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Var(String),
    /// `p1/p2/...`; a single IRI is a path of length one.
    Path(Vec<Iri>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: QueryTerm,
    pub predicate: Predicate,
    pub object: QueryTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Triple(TriplePattern),
    /// Two or more alternative groups.
    Union(Vec<GroupPattern>),
    /// A nested `{ ... }` group.
    Group(GroupPattern),
    SubSelect(Box<Select>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupPattern {
    pub elements: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Var(String),
    GroupConcat { var: String, separator: String, alias: String },
}

impl Projection {
    pub fn name(&self) -> &str {
        match self {
            Projection::Var(v) => v,
            Projection::GroupConcat { alias, .. } => alias,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Select {
    pub projection: Vec<Projection>,
    pub pattern: GroupPattern,
    pub group_by: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub select: Select,
}

impl GroupPattern {
    /// Variables that can be bound by this group, including sub-select outputs.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for e in &self.elements {
            match e {
                Element::Triple(t) => {
                    out.extend(t.subject.var().map(str::to_owned));
                    out.extend(t.object.var().map(str::to_owned));
                    if let Predicate::Var(v) = &t.predicate {
                        out.insert(v.clone());
                    }
                }
                Element::Union(branches) => branches.iter().for_each(|b| out.extend(b.variables())),
                Element::Group(g) => out.extend(g.variables()),
                Element::SubSelect(s) => out.extend(s.projection.iter().map(|p| p.name().to_owned())),
            }
        }
        out
    }

    pub fn sub_select_count(&self) -> usize {
        self.elements
            .iter()
            .map(|e| match e {
                Element::SubSelect(s) => 1 + s.pattern.sub_select_count(),
                Element::Union(bs) => bs.iter().map(GroupPattern::sub_select_count).sum(),
                Element::Group(g) => g.sub_select_count(),
                Element::Triple(_) => 0,
            })
            .sum()
    }

    pub fn union_count(&self) -> usize {
        self.elements
            .iter()
            .map(|e| match e {
                Element::Union(bs) => 1 + bs.iter().map(GroupPattern::union_count).sum::<usize>(),
                Element::SubSelect(s) => s.pattern.union_count(),
                Element::Group(g) => g.union_count(),
                Element::Triple(_) => 0,
            })
            .sum()
    }
}
