//! Validation of system descriptions against generic rules and their claimed
//! pattern's template, and enrichment with the template's workflow edges.

mod mapping;
mod rules;

pub use mapping::{find_mapping, map_instance, template_image, Instance, InstanceStep, InstanceVariable, TemplateMapping};
pub use rules::{
    derive_constraints, validate, ConstraintSet, Finding, PropertyRule, Severity, ValidationReport, GENERIC_RULES,
};

use crate::graph::{Graph, Term, Triple};
use crate::pattern::PatternLibrary;
use crate::vocab;

/// A system left untouched by [`enrich`], with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skipped {
    pub system: Term,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct Enrichment {
    pub graph: Graph,
    pub added: Vec<Triple>,
    pub skipped: Vec<Skipped>,
}

/// Materialize `componentInput`, `componentOutput` and `isPreceededBy` edges
/// for every system whose instance maps onto its claimed template.
/// Re-running on the output adds nothing.
pub fn enrich(graph: &Graph, library: &PatternLibrary) -> Enrichment {
    let mut out = graph.clone();
    let mut added = Vec::new();
    let mut skipped = Vec::new();
    let systems = graph.subjects(&vocab::iri(vocab::RDF_TYPE), &vocab::term(vocab::SYSTEM));
    for system in systems {
        let patterns = graph.objects(&system, &vocab::iri(vocab::HAS_CORRESPONDING_PATTERN));
        let mut skip = |reason: String| skipped.push(Skipped { system: system.clone(), reason });
        if patterns.is_empty() {
            skip("no pattern claimed".into());
            continue;
        }
        let inst = Instance::extract(graph, &system);
        for pattern in patterns {
            let Some(template) = library.templates().find(|t| Some(&t.iri) == pattern.as_iri()) else {
                skip(format!("unknown pattern {pattern}"));
                continue;
            };
            let Some(mapping) = map_instance(&inst, template) else {
                skip(format!("no mapping onto {pattern}"));
                continue;
            };
            for (s, p, o) in template_image(&inst, template, &mapping) {
                let triple = Triple::new(s, p, o).expect("instance steps are IRIs or blank nodes");
                if out.insert(triple.clone()) {
                    added.push(triple);
                }
            }
        }
    }
    added.sort();
    Enrichment { graph: out, added, skipped }
}
