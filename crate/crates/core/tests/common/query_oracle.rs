//! Random queries over a small vocabulary, their text form, and a
//! reference evaluator that works by full scans and pairwise joins.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use swemls_core::graph::{Graph, Iri, Literal, Term, Triple};

pub const NS: &str = "http://ex.org/";
const NODES: usize = 8;
const PREDICATES: usize = 4;
const LITERALS: usize = 3;
const VARS: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Clone, Debug)]
pub enum QTerm {
    Var(String),
    Node(usize),
    Lit(usize),
}

#[derive(Clone, Debug)]
pub enum QPred {
    Var(String),
    Path(Vec<usize>),
}

#[derive(Clone, Debug)]
pub enum QElem {
    Triple(QTerm, QPred, QTerm),
    Union(Vec<Vec<QElem>>),
    Group(Vec<QElem>),
    Sub(SubQuery),
}

#[derive(Clone, Debug)]
pub struct SubQuery {
    pub group_by: Vec<String>,
    /// (variable, separator, alias)
    pub concat: Option<(String, String, String)>,
    pub body: Vec<QElem>,
}

#[derive(Clone, Debug)]
pub struct RandomQuery {
    pub projection: Vec<String>,
    pub body: Vec<QElem>,
}

fn node(i: usize) -> Term {
    Term::Iri(Iri::new(format!("{NS}n{i}")).unwrap())
}

fn pred(i: usize) -> Iri {
    Iri::new(format!("{NS}p{i}")).unwrap()
}

fn lit(i: usize) -> Term {
    Term::Literal(Literal::plain(format!("l{i}")))
}

/// Random graph over the query vocabulary; at most 500 triples.
pub fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new();
    let target = rng.gen_range(0..=200);
    for _ in 0..target {
        let s = node(rng.gen_range(0..NODES));
        let o = if rng.gen_bool(0.8) { node(rng.gen_range(0..NODES)) } else { lit(rng.gen_range(0..LITERALS)) };
        g.insert(Triple::new(s, pred(rng.gen_range(0..PREDICATES)), o).unwrap());
    }
    assert!(g.len() <= 500);
    g
}

fn var(rng: &mut ChaCha8Rng) -> String {
    VARS.choose(rng).unwrap().to_string()
}

fn triple(rng: &mut ChaCha8Rng) -> QElem {
    let s = if rng.gen_bool(0.75) { QTerm::Var(var(rng)) } else { QTerm::Node(rng.gen_range(0..NODES)) };
    let p = match rng.gen_range(0..10) {
        0 => QPred::Var(var(rng)),
        1..=6 => QPred::Path(vec![rng.gen_range(0..PREDICATES)]),
        _ => QPred::Path((0..rng.gen_range(2..=3)).map(|_| rng.gen_range(0..PREDICATES)).collect()),
    };
    let o = match rng.gen_range(0..10) {
        0..=6 => QTerm::Var(var(rng)),
        7 | 8 => QTerm::Node(rng.gen_range(0..NODES)),
        _ => QTerm::Lit(rng.gen_range(0..LITERALS)),
    };
    QElem::Triple(s, p, o)
}

fn triples(rng: &mut ChaCha8Rng, max: usize) -> Vec<QElem> {
    (0..rng.gen_range(1..=max)).map(|_| triple(rng)).collect()
}

fn element(rng: &mut ChaCha8Rng, depth: u32, alias: &mut usize) -> QElem {
    if depth == 0 {
        return triple(rng);
    }
    match rng.gen_range(0..10) {
        0..=4 => triple(rng),
        5 | 6 => QElem::Union((0..rng.gen_range(2..=3)).map(|_| body(rng, depth - 1, 2, alias)).collect()),
        7 => QElem::Group(body(rng, depth - 1, 2, alias)),
        _ => {
            let inner = triples(rng, 2);
            let mut vars: Vec<String> = Vec::new();
            collect_vars(&inner, &mut vars);
            if vars.is_empty() {
                return QElem::Group(inner);
            }
            let keys = rng.gen_range(1..=vars.len().min(2));
            let mut group_by: Vec<String> = vars.choose_multiple(rng, keys).cloned().collect();
            group_by.sort();
            let concat = rng.gen_bool(0.8).then(|| {
                let name = format!("g{alias}");
                *alias += 1;
                (vars.choose(rng).unwrap().clone(), [",", " ", ";"].choose(rng).unwrap().to_string(), name)
            });
            QElem::Sub(SubQuery { group_by, concat, body: inner })
        }
    }
}

fn body(rng: &mut ChaCha8Rng, depth: u32, max: usize, alias: &mut usize) -> Vec<QElem> {
    (0..rng.gen_range(1..=max)).map(|_| element(rng, depth, alias)).collect()
}

/// Variables visible to the enclosing group, in first-occurrence order.
pub fn collect_vars(elems: &[QElem], out: &mut Vec<String>) {
    fn add(out: &mut Vec<String>, v: &String) {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    for e in elems {
        match e {
            QElem::Triple(s, p, o) => {
                if let QTerm::Var(v) = s {
                    add(out, v);
                }
                if let QPred::Var(v) = p {
                    add(out, v);
                }
                if let QTerm::Var(v) = o {
                    add(out, v);
                }
            }
            QElem::Union(bs) => bs.iter().for_each(|b| collect_vars(b, out)),
            QElem::Group(g) => collect_vars(g, out),
            QElem::Sub(s) => {
                s.group_by.iter().for_each(|v| add(out, v));
                if let Some((_, _, a)) = &s.concat {
                    add(out, a);
                }
            }
        }
    }
}

pub fn random_query(rng: &mut ChaCha8Rng) -> RandomQuery {
    loop {
        let mut alias = 0;
        let body = body(rng, 2, 3, &mut alias);
        let mut vars = Vec::new();
        collect_vars(&body, &mut vars);
        if vars.is_empty() {
            continue;
        }
        let width = rng.gen_range(1..=vars.len());
        let mut projection: Vec<String> = vars.choose_multiple(rng, width).cloned().collect();
        projection.sort();
        return RandomQuery { projection, body };
    }
}

fn term_text(t: &QTerm) -> String {
    match t {
        QTerm::Var(v) => format!("?{v}"),
        QTerm::Node(i) => format!("ex:n{i}"),
        QTerm::Lit(i) => format!("\"l{i}\""),
    }
}

fn body_text(elems: &[QElem]) -> String {
    elems
        .iter()
        .map(|e| match e {
            QElem::Triple(s, p, o) => {
                let p = match p {
                    QPred::Var(v) => format!("?{v}"),
                    QPred::Path(ps) => ps.iter().map(|i| format!("ex:p{i}")).collect::<Vec<_>>().join("/"),
                };
                format!("{} {p} {} .", term_text(s), term_text(o))
            }
            QElem::Union(bs) => bs.iter().map(|b| format!("{{ {} }}", body_text(b))).collect::<Vec<_>>().join(" UNION "),
            QElem::Group(g) => format!("{{ {} }}", body_text(g)),
            QElem::Sub(s) => {
                let mut proj: Vec<String> = s.group_by.iter().map(|v| format!("?{v}")).collect();
                if let Some((v, sep, alias)) = &s.concat {
                    proj.push(format!("(group_concat(?{v}; separator=\"{sep}\") AS ?{alias})"));
                }
                let keys: Vec<String> = s.group_by.iter().map(|v| format!("?{v}")).collect();
                format!("{{ SELECT {} WHERE {{ {} }} GROUP BY {} }}", proj.join(" "), body_text(&s.body), keys.join(" "))
            }
        })
        .collect::<Vec<_>>()
        .join("\n  ")
}

pub fn query_text(q: &RandomQuery) -> String {
    let proj: Vec<String> = q.projection.iter().map(|v| format!("?{v}")).collect();
    format!("PREFIX ex: <{NS}>\nSELECT {} WHERE {{\n  {}\n}}\n", proj.join(" "), body_text(&q.body))
}

type Row = BTreeMap<String, Term>;

/// Intermediate results larger than this abort the reference evaluation.
pub const ROW_BUDGET: usize = 20_000;

pub struct Budget;

fn check(rows: Vec<Row>) -> Result<Vec<Row>, Budget> {
    if rows.len() > ROW_BUDGET {
        Err(Budget)
    } else {
        Ok(rows)
    }
}

fn string_value(t: &Term) -> String {
    match t {
        Term::Iri(i) => i.as_str().to_owned(),
        Term::Blank(b) => b.clone(),
        Term::Literal(l) => l.lexical().to_owned(),
    }
}

fn concrete(t: &QTerm) -> Option<Term> {
    match t {
        QTerm::Var(_) => None,
        QTerm::Node(i) => Some(node(*i)),
        QTerm::Lit(i) => Some(lit(*i)),
    }
}

/// Adds `name = value` to `row`, failing on a conflicting binding.
fn assign(row: &mut Row, name: &str, value: &Term) -> bool {
    match row.get(name) {
        Some(existing) => existing == value,
        None => {
            row.insert(name.to_owned(), value.clone());
            true
        }
    }
}

fn bind_term(row: &mut Row, pattern: &QTerm, value: &Term) -> bool {
    match pattern {
        QTerm::Var(v) => assign(row, v, value),
        other => concrete(other).as_ref() == Some(value),
    }
}

/// All (subject, object) pairs connected by the predicate sequence, one pair
/// per distinct chain of intermediate nodes.
fn path_pairs(triples: &[Triple], path: &[usize]) -> Vec<(Term, Term)> {
    let first = pred(path[0]);
    let mut pairs: Vec<(Term, Term)> =
        triples.iter().filter(|t| t.predicate == first).map(|t| (t.subject.clone(), t.object.clone())).collect();
    for &p in &path[1..] {
        let p = pred(p);
        let mut next = Vec::new();
        for (s, mid) in &pairs {
            for t in triples.iter().filter(|t| t.predicate == p && t.subject == *mid) {
                next.push((s.clone(), t.object.clone()));
            }
        }
        pairs = next;
    }
    pairs
}

fn eval_triple(triples: &[Triple], s: &QTerm, p: &QPred, o: &QTerm) -> Vec<Row> {
    let mut out = Vec::new();
    match p {
        QPred::Path(path) => {
            for (subj, obj) in path_pairs(triples, path) {
                let mut row = Row::new();
                if bind_term(&mut row, s, &subj) && bind_term(&mut row, o, &obj) {
                    out.push(row);
                }
            }
        }
        QPred::Var(pv) => {
            for t in triples {
                let mut row = Row::new();
                if bind_term(&mut row, s, &t.subject)
                    && assign(&mut row, pv, &Term::Iri(t.predicate.clone()))
                    && bind_term(&mut row, o, &t.object)
                {
                    out.push(row);
                }
            }
        }
    }
    out
}

fn join(left: &[Row], right: &[Row]) -> Result<Vec<Row>, Budget> {
    let mut out = Vec::new();
    for l in left {
        'pair: for r in right {
            let mut merged = l.clone();
            for (k, v) in r {
                if !assign(&mut merged, k, v) {
                    continue 'pair;
                }
            }
            out.push(merged);
            if out.len() > ROW_BUDGET {
                return Err(Budget);
            }
        }
    }
    Ok(out)
}

fn eval_body(triples: &[Triple], elems: &[QElem]) -> Result<Vec<Row>, Budget> {
    // Evaluate every element on its own, then join them all.
    let parts = elems
        .iter()
        .map(|e| match e {
            QElem::Triple(s, p, o) => check(eval_triple(triples, s, p, o)),
            QElem::Union(bs) => {
                let mut all = Vec::new();
                for b in bs {
                    all.extend(eval_body(triples, b)?);
                }
                check(all)
            }
            QElem::Group(g) => eval_body(triples, g),
            QElem::Sub(s) => eval_sub(triples, s),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut acc = vec![Row::new()];
    for part in parts {
        acc = join(&acc, &part)?;
    }
    Ok(acc)
}

fn eval_sub(triples: &[Triple], sub: &SubQuery) -> Result<Vec<Row>, Budget> {
    let rows = eval_body(triples, &sub.body)?;
    let mut groups: Vec<(Vec<Option<Term>>, Vec<Row>)> = Vec::new();
    for row in rows {
        let key: Vec<Option<Term>> = sub.group_by.iter().map(|v| row.get(v).cloned()).collect();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    Ok(groups
        .into_iter()
        .map(|(key, members)| {
            let mut out = Row::new();
            for (v, value) in sub.group_by.iter().zip(key) {
                if let Some(value) = value {
                    out.insert(v.clone(), value);
                }
            }
            if let Some((v, sep, alias)) = &sub.concat {
                let mut values: Vec<String> = members.iter().filter_map(|m| m.get(v)).map(string_value).collect();
                values.sort();
                out.insert(alias.clone(), Term::Literal(Literal::plain(values.join(sep))));
            }
            out
        })
        .collect())
}

/// Sorted result rows, or `Err` when an intermediate result exceeds
/// [`ROW_BUDGET`].
pub fn reference_eval(graph: &Graph, q: &RandomQuery) -> Result<Vec<Vec<Option<Term>>>, Budget> {
    let triples: Vec<Triple> = graph.iter().collect();
    let rows = eval_body(&triples, &q.body)?;
    let mut table: Vec<Vec<Option<Term>>> =
        rows.iter().map(|r| q.projection.iter().map(|v| r.get(v).cloned()).collect()).collect();
    table.sort();
    Ok(table)
}
