use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, Term};
use crate::vocab;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Year,
    Pattern,
    Domain,
    Task,
    Maturity,
    TrainingType,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown dimension `{0}` (expected year, pattern, domain, task, maturity or training-type)")]
pub struct UnknownDimension(pub String);

impl FromStr for Dimension {
    type Err = UnknownDimension;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "year" => Dimension::Year,
            "pattern" => Dimension::Pattern,
            "domain" => Dimension::Domain,
            "task" => Dimension::Task,
            "maturity" => Dimension::Maturity,
            "training-type" => Dimension::TrainingType,
            _ => return Err(UnknownDimension(s.to_owned())),
        })
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Year => "year",
            Dimension::Pattern => "pattern",
            Dimension::Domain => "domain",
            Dimension::Task => "task",
            Dimension::Maturity => "maturity",
            Dimension::TrainingType => "training-type",
        })
    }
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Year,
        Dimension::Pattern,
        Dimension::Domain,
        Dimension::Task,
        Dimension::Maturity,
        Dimension::TrainingType,
    ];

    fn system_property(self) -> Option<&'static str> {
        match self {
            Dimension::Year => None,
            Dimension::Pattern => Some(vocab::HAS_CORRESPONDING_PATTERN),
            Dimension::Domain => Some(vocab::HAS_APPLICATION_DOMAIN),
            Dimension::Task => Some(vocab::HAS_TASK),
            Dimension::Maturity => Some(vocab::HAS_MATURITY_LEVEL),
            Dimension::TrainingType => Some(vocab::HAS_TRAINING_TYPE),
        }
    }
}

/// Display text of a value: literal text, else the node's label, else the
/// compact IRI.
pub fn value_text(graph: &Graph, term: &Term) -> String {
    match term {
        Term::Literal(l) => l.lexical().to_owned(),
        Term::Iri(iri) => match graph.object(term, &vocab::iri(vocab::RDFS_LABEL)) {
            Some(Term::Literal(l)) => l.lexical().to_owned(),
            _ => vocab::default_prefixes().compact(iri.as_str()).unwrap_or_else(|| iri.as_str().to_owned()),
        },
        Term::Blank(b) => format!("_:{b}"),
    }
}

/// Number of systems per value of `dimension`, sorted by count descending,
/// then value. A system with several values counts once for each.
pub fn trend_report(graph: &Graph, dimension: Dimension) -> Vec<(String, usize)> {
    let systems = graph.subjects(&vocab::iri(vocab::RDF_TYPE), &vocab::term(vocab::SYSTEM));
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for system in &systems {
        let values: Vec<Term> = match dimension.system_property() {
            Some(p) => graph.objects(system, &vocab::iri(p)),
            None => graph
                .subjects(&vocab::iri(vocab::REPORTS), system)
                .iter()
                .flat_map(|paper| graph.objects(paper, &vocab::iri(vocab::YEAR)))
                .collect(),
        };
        let mut texts: Vec<String> = values.iter().map(|v| value_text(graph, v)).collect();
        texts.sort();
        texts.dedup();
        for t in texts {
            *counts.entry(t).or_default() += 1;
        }
    }
    let mut rows: Vec<(String, usize)> = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}
