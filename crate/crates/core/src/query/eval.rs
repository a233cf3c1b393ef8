use std::collections::BTreeMap;

use super::ast::{Element, GroupPattern, Predicate, Projection, Query, QueryTerm, Select, TriplePattern};
use crate::graph::{Graph, Iri, Literal, Term};

/// Variable bindings of one solution; unbound variables are absent.
pub type Solution = BTreeMap<String, Term>;

/// Query result: projected columns and rows sorted by column values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BindingTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<Term>>>,
}

impl BindingTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Header of `?name` columns, then one line per row; cells in N-Triples
    /// form, empty when unbound.
    pub fn to_tsv(&self) -> String {
        let mut out: String = self.columns.iter().map(|c| format!("?{c}")).collect::<Vec<_>>().join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> =
                row.iter().map(|c| c.as_ref().map(|t| t.to_string()).unwrap_or_default()).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// Name for the hidden intermediate node of a sequence path. Contains a
/// space, so it can never clash with a query variable.
fn hidden(n: usize) -> String {
    format!(" path{n}")
}

fn bind(sol: &Solution, term: &QueryTerm, value: &Term) -> Option<Solution> {
    match term {
        QueryTerm::Const(c) => (c == value).then(|| sol.clone()),
        QueryTerm::Var(v) => match sol.get(v) {
            Some(bound) => (bound == value).then(|| sol.clone()),
            None => {
                let mut s = sol.clone();
                s.insert(v.clone(), value.clone());
                Some(s)
            }
        },
    }
}

fn resolve<'a>(sol: &'a Solution, term: &'a QueryTerm) -> Option<&'a Term> {
    match term {
        QueryTerm::Const(c) => Some(c),
        QueryTerm::Var(v) => sol.get(v),
    }
}

fn match_step(graph: &Graph, sols: Vec<Solution>, s: &QueryTerm, p: &Predicate, o: &QueryTerm) -> Vec<Solution> {
    let mut out = Vec::new();
    for sol in sols {
        let subject = resolve(&sol, s).cloned();
        let object = resolve(&sol, o).cloned();
        let pred: Option<Iri> = match p {
            Predicate::Path(path) => Some(path[0].clone()),
            Predicate::Var(v) => match sol.get(v) {
                Some(Term::Iri(i)) => Some(i.clone()),
                Some(_) => continue,
                None => None,
            },
        };
        for t in graph.matches(subject.as_ref(), pred.as_ref(), object.as_ref()) {
            let Some(mut next) = bind(&sol, s, &t.subject) else { continue };
            if let Predicate::Var(v) = p {
                match bind(&next, &QueryTerm::Var(v.clone()), &Term::Iri(t.predicate.clone())) {
                    Some(n) => next = n,
                    None => continue,
                }
            }
            if let Some(n) = bind(&next, o, &t.object) {
                out.push(n);
            }
        }
    }
    out
}

fn match_triple(graph: &Graph, sols: Vec<Solution>, tp: &TriplePattern) -> Vec<Solution> {
    let Predicate::Path(path) = &tp.predicate else {
        return match_step(graph, sols, &tp.subject, &tp.predicate, &tp.object);
    };
    let mut sols = sols;
    let mut current = tp.subject.clone();
    for (i, iri) in path.iter().enumerate() {
        let next = if i + 1 == path.len() { tp.object.clone() } else { QueryTerm::Var(hidden(i)) };
        sols = match_step(graph, sols, &current, &Predicate::Path(vec![iri.clone()]), &next);
        current = next;
    }
    if path.len() > 1 {
        for s in &mut sols {
            s.retain(|k, _| !k.starts_with(' '));
        }
    }
    sols
}

fn compatible(a: &Solution, b: &Solution) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().all(|(k, v)| large.get(k).is_none_or(|w| w == v))
}

/// Bag join: every compatible pair contributes one merged solution.
pub fn join(left: &[Solution], right: &[Solution]) -> Vec<Solution> {
    let mut out = Vec::new();
    for a in left {
        for b in right {
            if compatible(a, b) {
                let mut m = a.clone();
                m.extend(b.iter().map(|(k, v)| (k.clone(), v.clone())));
                out.push(m);
            }
        }
    }
    out
}

pub fn eval_group(graph: &Graph, group: &GroupPattern) -> Vec<Solution> {
    let mut sols = vec![Solution::new()];
    for e in &group.elements {
        sols = match e {
            Element::Triple(tp) => match_triple(graph, sols, tp),
            Element::Union(branches) => {
                let alternatives: Vec<Solution> = branches.iter().flat_map(|b| eval_group(graph, b)).collect();
                join(&sols, &alternatives)
            }
            Element::Group(g) => join(&sols, &eval_group(graph, g)),
            Element::SubSelect(s) => join(&sols, &eval_select(graph, s)),
        };
        if sols.is_empty() {
            break;
        }
    }
    sols
}

/// Solutions of a (sub-)select restricted to its projection.
pub fn eval_select(graph: &Graph, select: &Select) -> Vec<Solution> {
    let sols = eval_group(graph, &select.pattern);
    if select.group_by.is_empty() {
        return sols
            .into_iter()
            .map(|s| {
                select.projection.iter().filter_map(|p| s.get(p.name()).map(|v| (p.name().to_owned(), v.clone()))).collect()
            })
            .collect();
    }
    let mut groups: BTreeMap<Vec<Option<Term>>, Vec<Solution>> = BTreeMap::new();
    for s in sols {
        let key = select.group_by.iter().map(|g| s.get(g).cloned()).collect();
        groups.entry(key).or_default().push(s);
    }
    groups
        .into_iter()
        .map(|(key, members)| {
            let mut row = Solution::new();
            for p in &select.projection {
                match p {
                    Projection::Var(v) => {
                        let idx = select.group_by.iter().position(|g| g == v).expect("validated: projected vars are grouped");
                        if let Some(t) = &key[idx] {
                            row.insert(v.clone(), t.clone());
                        }
                    }
                    Projection::GroupConcat { var, separator, alias } => {
                        let mut values: Vec<&str> = members.iter().filter_map(|m| m.get(var)).map(Term::str_value).collect();
                        values.sort_unstable();
                        row.insert(alias.clone(), Term::Literal(Literal::plain(values.join(separator))));
                    }
                }
            }
            row
        })
        .collect()
}

pub fn evaluate(query: &Query, graph: &Graph) -> BindingTable {
    let columns: Vec<String> = query.select.projection.iter().map(|p| p.name().to_owned()).collect();
    let mut rows: Vec<Vec<Option<Term>>> = eval_select(graph, &query.select)
        .into_iter()
        .map(|s| columns.iter().map(|c| s.get(c).cloned()).collect())
        .collect();
    rows.sort();
    BindingTable { columns, rows }
}
