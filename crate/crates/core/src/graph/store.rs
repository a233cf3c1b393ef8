use std::collections::{BTreeMap, BTreeSet};

use super::{GraphError, Iri, Term, Triple};

/// Prefix → namespace table, ordered by prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.entries.insert(prefix.into(), namespace.into());
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.entries.get(prefix).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, n)| (p.as_str(), n.as_str()))
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Option<String> {
        self.get(prefix).map(|ns| format!("{ns}{local}"))
    }

    /// Shortest `prefix:local` form whose local part needs no escaping, if any.
    pub fn compact(&self, iri: &str) -> Option<String> {
        self.entries
            .iter()
            .filter_map(|(p, ns)| iri.strip_prefix(ns.as_str()).map(|local| (p, ns.len(), local)))
            .filter(|(_, _, local)| is_plain_local(local))
            .max_by_key(|(_, len, _)| *len)
            .map(|(p, _, local)| format!("{p}:{local}"))
    }
}

/// Conservative subset of Turtle's PN_LOCAL that round-trips without escapes.
pub(crate) fn is_plain_local(local: &str) -> bool {
    let ok_char = |c: char| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.');
    match (local.chars().next(), local.chars().last()) {
        (None, _) => true,
        (Some(first), Some(last)) => {
            (first.is_ascii_alphanumeric() || first == '_') && last != '.' && local.chars().all(ok_char)
        }
        _ => false,
    }
}

type Index = BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>;

/// A set of triples indexed by subject, predicate and object.
///
/// Equality compares the triple sets only; the prefix table is presentation.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    spo: Index,
    pos: Index,
    osp: Index,
    len: usize,
    prefixes: PrefixMap,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.spo == other.spo
    }
}

impl Eq for Graph {}

fn index_insert(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    index.entry(a.clone()).or_default().entry(b.clone()).or_default().insert(c.clone())
}

fn index_remove(index: &mut Index, a: &Term, b: &Term, c: &Term) {
    if let Some(inner) = index.get_mut(a) {
        if let Some(set) = inner.get_mut(b) {
            set.remove(c);
            if set.is_empty() {
                inner.remove(b);
            }
        }
        if inner.is_empty() {
            index.remove(a);
        }
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    /// Returns `true` if the triple was not present before.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let Triple { subject: s, predicate, object: o } = triple;
        let p = Term::Iri(predicate);
        if !index_insert(&mut self.spo, &s, &p, &o) {
            return false;
        }
        index_insert(&mut self.pos, &p, &o, &s);
        index_insert(&mut self.osp, &o, &s, &p);
        self.len += 1;
        true
    }

    /// Insert from untyped terms, rejecting literal subjects and non-IRI predicates.
    pub fn insert_terms(&mut self, s: Term, p: Term, o: Term) -> Result<bool, GraphError> {
        Ok(self.insert(Triple::from_terms(s, p, o)?))
    }

    /// Convenience for internal producers whose subjects are never literals.
    pub(crate) fn add(&mut self, s: &Term, p: &Iri, o: impl Into<Term>) {
        self.insert(Triple::new(s.clone(), p.clone(), o.into()).expect("producer subjects are IRIs or blank nodes"));
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let p = Term::Iri(triple.predicate.clone());
        if !self.contains(triple) {
            return false;
        }
        index_remove(&mut self.spo, &triple.subject, &p, &triple.object);
        index_remove(&mut self.pos, &p, &triple.object, &triple.subject);
        index_remove(&mut self.osp, &triple.object, &triple.subject, &p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|m| m.get(&Term::Iri(triple.predicate.clone())))
            .is_some_and(|set| set.contains(&triple.object))
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) {
        for t in triples {
            self.insert(t);
        }
    }

    pub fn merge(&mut self, other: &Graph) {
        self.extend(other.iter());
        for (p, ns) in other.prefixes.iter() {
            if self.prefixes.get(p).is_none() {
                self.prefixes.insert(p, ns);
            }
        }
    }

    /// All triples in (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, by_p)| {
            by_p.iter().flat_map(move |(p, objs)| objs.iter().map(move |o| make_triple(s, p, o)))
        })
    }

    /// Triples consistent with the bound positions, sorted by (s, p, o).
    pub fn matches(&self, s: Option<&Term>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let p_term = p.map(|p| Term::Iri(p.clone()));
        let p = p_term.as_ref();
        let mut out = Vec::new();
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.get(s).and_then(|m| m.get(p)).is_some_and(|set| set.contains(o)) {
                    out.push(make_triple(s, p, o));
                }
                return out;
            }
            (Some(s), Some(p), None) => {
                if let Some(objs) = self.spo.get(s).and_then(|m| m.get(p)) {
                    out.extend(objs.iter().map(|o| make_triple(s, p, o)));
                }
                return out;
            }
            (Some(s), None, None) => {
                if let Some(by_p) = self.spo.get(s) {
                    for (p, objs) in by_p {
                        out.extend(objs.iter().map(|o| make_triple(s, p, o)));
                    }
                }
                return out;
            }
            (None, None, None) => return self.iter().collect(),
            (None, Some(p), Some(o)) => {
                if let Some(subjs) = self.pos.get(p).and_then(|m| m.get(o)) {
                    out.extend(subjs.iter().map(|s| make_triple(s, p, o)));
                }
                return out;
            }
            (None, Some(p), None) => {
                if let Some(by_o) = self.pos.get(p) {
                    for (o, subjs) in by_o {
                        out.extend(subjs.iter().map(|s| make_triple(s, p, o)));
                    }
                }
            }
            (Some(s), None, Some(o)) => {
                if let Some(preds) = self.osp.get(o).and_then(|m| m.get(s)) {
                    out.extend(preds.iter().map(|p| make_triple(s, p, o)));
                }
                return out;
            }
            (None, None, Some(o)) => {
                if let Some(by_s) = self.osp.get(o) {
                    for (s, preds) in by_s {
                        out.extend(preds.iter().map(|p| make_triple(s, p, o)));
                    }
                }
                return out;
            }
        }
        out.sort();
        out
    }

    pub fn objects(&self, s: &Term, p: &Iri) -> Vec<Term> {
        self.spo
            .get(s)
            .and_then(|m| m.get(&Term::Iri(p.clone())))
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn object(&self, s: &Term, p: &Iri) -> Option<Term> {
        self.spo.get(s).and_then(|m| m.get(&Term::Iri(p.clone()))).and_then(|set| set.first().cloned())
    }

    pub fn subjects(&self, p: &Iri, o: &Term) -> Vec<Term> {
        self.pos
            .get(&Term::Iri(p.clone()))
            .and_then(|m| m.get(o))
            .map(|set| set.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn has_type(&self, s: &Term, class: &Iri) -> bool {
        self.contains(&Triple {
            subject: s.clone(),
            predicate: crate::vocab::iri(crate::vocab::RDF_TYPE),
            object: Term::Iri(class.clone()),
        })
    }

    /// Distinct subjects, sorted.
    pub fn subject_terms(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    /// Outgoing (predicate, object) pairs of a node, sorted.
    pub fn outgoing(&self, s: &Term) -> Vec<(Iri, Term)> {
        let mut out = Vec::new();
        if let Some(by_p) = self.spo.get(s) {
            for (p, objs) in by_p {
                let p = p.as_iri().expect("predicates are IRIs").clone();
                out.extend(objs.iter().map(|o| (p.clone(), o.clone())));
            }
        }
        out
    }
}

fn make_triple(s: &Term, p: &Term, o: &Term) -> Triple {
    Triple {
        subject: s.clone(),
        predicate: p.as_iri().expect("predicates are IRIs").clone(),
        object: o.clone(),
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}
