use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::mapping::{map_instance, template_image, Instance};
use crate::boxology::{ArtifactKind, ProcessorKind};
use crate::graph::{Graph, Iri, Term};
use crate::pattern::{PatternLibrary, WorkflowTemplate};
use crate::vocab;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Violation,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Violation => "violation",
            Severity::Warning => "warning",
        })
    }
}

/// A required or recommended property on nodes of a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropertyRule {
    pub id: &'static str,
    pub class: &'static str,
    pub property: &'static str,
    /// Property points at the focus node instead of away from it.
    pub inverse: bool,
    pub severity: Severity,
}

const fn rule(id: &'static str, class: &'static str, property: &'static str, severity: Severity) -> PropertyRule {
    PropertyRule { id, class, property, inverse: false, severity }
}

pub const GENERIC_RULES: &[PropertyRule] = &[
    PropertyRule {
        id: "generic/paper",
        class: vocab::SYSTEM,
        property: vocab::REPORTS,
        inverse: true,
        severity: Severity::Violation,
    },
    rule("generic/task", vocab::SYSTEM, vocab::HAS_TASK, Severity::Violation),
    rule("generic/domain", vocab::SYSTEM, vocab::HAS_APPLICATION_DOMAIN, Severity::Violation),
    rule("generic/pattern", vocab::SYSTEM, vocab::HAS_CORRESPONDING_PATTERN, Severity::Violation),
    rule("generic/title", vocab::PAPER, vocab::TERMS_TITLE, Severity::Violation),
    rule("generic/year", vocab::PAPER, vocab::YEAR, Severity::Violation),
    rule("doc/source-code", vocab::SYSTEM, vocab::HAS_SOURCE_CODE, Severity::Warning),
    rule("doc/infrastructure", vocab::SYSTEM, vocab::HAS_INFRASTRUCTURE_DESCRIPTION, Severity::Warning),
    rule("doc/evaluation-setup", vocab::SYSTEM, vocab::HAS_EVALUATION_SETUP, Severity::Warning),
    rule("doc/provenance", vocab::SYSTEM, vocab::HAS_PROVENANCE_CAPTURE, Severity::Warning),
];

/// Rules a system claiming a given pattern must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    pub generic: &'static [PropertyRule],
    pub pattern: Iri,
    pub pattern_id: String,
    pub step_counts: BTreeMap<ProcessorKind, usize>,
    pub variable_counts: BTreeMap<ArtifactKind, usize>,
    pub template: WorkflowTemplate,
}

impl ConstraintSet {
    pub fn derive(template: &WorkflowTemplate) -> ConstraintSet {
        let mut step_counts = BTreeMap::new();
        for kind in [ProcessorKind::Ml, ProcessorKind::Kr] {
            step_counts.insert(kind, template.step_count(kind));
        }
        let mut variable_counts = BTreeMap::new();
        for kind in [ArtifactKind::Sym, ArtifactKind::Data] {
            variable_counts.insert(kind, template.variable_count(kind));
        }
        ConstraintSet {
            generic: GENERIC_RULES,
            pattern: template.iri.clone(),
            pattern_id: template.id.clone(),
            step_counts,
            variable_counts,
            template: template.clone(),
        }
    }

    /// Pattern findings for one system instance.
    pub fn check(&self, inst: &Instance) -> Vec<Finding> {
        let id = &self.pattern_id;
        let mut out = Vec::new();
        let mut finding = |rule: String, severity, message: String| {
            out.push(Finding { focus: inst.system.clone(), rule, severity, message })
        };
        let steps: BTreeMap<ProcessorKind, usize> = self
            .step_counts
            .keys()
            .map(|&k| (k, inst.steps.iter().filter(|s| s.kind == k).count()))
            .collect();
        if steps != self.step_counts {
            finding(
                format!("pattern-steps/{id}"),
                Severity::Violation,
                format!("expected {} steps, found {}", step_summary(&self.step_counts), step_summary(&steps)),
            );
        }
        let untyped = inst.variables.iter().filter(|v| v.kind.is_none()).count();
        let vars: BTreeMap<ArtifactKind, usize> = self
            .variable_counts
            .keys()
            .map(|&k| (k, inst.variables.iter().filter(|v| v.kind == Some(k)).count()))
            .collect();
        if vars != self.variable_counts || untyped > 0 {
            let mut message =
                format!("expected {} variables, found {}", var_summary(&self.variable_counts), var_summary(&vars));
            if untyped > 0 {
                message.push_str(&format!(" and {untyped} untyped"));
            }
            finding(format!("pattern-variables/{id}"), Severity::Violation, message);
        }
        if !out.is_empty() {
            return out;
        }
        let Some(mapping) = map_instance(inst, &self.template) else {
            return vec![Finding {
                focus: inst.system.clone(),
                rule: format!("pattern-wiring/{id}"),
                severity: Severity::Violation,
                message: "no kind-, ordinal-, role- and edge-preserving mapping onto the template".into(),
            }];
        };
        let image = template_image(inst, &self.template, &mapping);
        let present: Vec<(Term, Iri, Term)> = instance_edges(inst);
        for edge in image.iter().filter(|e| !present.contains(e)) {
            out.push(Finding {
                focus: inst.system.clone(),
                rule: format!("pattern-wiring/{id}"),
                severity: Severity::Violation,
                message: format!("missing {} {} {}", edge.0, edge.1, edge.2),
            });
        }
        if mapping.ambiguous {
            out.push(Finding {
                focus: inst.system.clone(),
                rule: format!("pattern-ambiguous/{id}"),
                severity: Severity::Warning,
                message: "more than one mapping onto the template; kept the first in search order".into(),
            });
        }
        out
    }
}

fn step_summary(counts: &BTreeMap<ProcessorKind, usize>) -> String {
    counts.iter().map(|(k, n)| format!("{n} {}", k.token())).collect::<Vec<_>>().join(", ")
}

fn var_summary(counts: &BTreeMap<ArtifactKind, usize>) -> String {
    counts.iter().map(|(k, n)| format!("{n} {}", k.token())).collect::<Vec<_>>().join(", ")
}

pub(crate) fn instance_edges(inst: &Instance) -> Vec<(Term, Iri, Term)> {
    let mut out = Vec::new();
    for &(s, v) in &inst.inputs {
        out.push((inst.steps[s].node.clone(), vocab::iri(vocab::COMPONENT_INPUT), inst.variables[v].node.clone()));
    }
    for &(s, v) in &inst.outputs {
        out.push((inst.steps[s].node.clone(), vocab::iri(vocab::COMPONENT_OUTPUT), inst.variables[v].node.clone()));
    }
    for &(a, b) in &inst.precedes {
        out.push((
            inst.steps[a].node.clone(),
            vocab::iri(vocab::PPLAN_IS_PRECEEDED_BY),
            inst.steps[b].node.clone(),
        ));
    }
    out.sort();
    out
}

pub fn derive_constraints(template: &WorkflowTemplate) -> ConstraintSet {
    ConstraintSet::derive(template)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub focus: Term,
    pub rule: String,
    pub severity: Severity,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub conforms: bool,
    pub systems_checked: usize,
    /// Sorted by focus node, then rule.
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Violation)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    /// One record per line: focus, rule, severity, message.
    pub fn to_tsv(&self) -> String {
        let clean = |s: &str| s.replace(['\t', '\n', '\r'], " ");
        self.findings
            .iter()
            .map(|f| format!("{}\t{}\t{}\t{}\n", f.focus, f.rule, f.severity, clean(&f.message)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "conforms: {}\nsystems checked: {}\nviolations: {}\nwarnings: {}\n",
            self.conforms,
            self.systems_checked,
            self.violations().count(),
            self.warnings().count()
        );
        for f in &self.findings {
            out.push_str(&format!("{} [{}] {}: {}\n", f.severity, f.rule, f.focus, f.message));
        }
        out
    }
}

fn property_findings(graph: &Graph, focus: &Term, class: &str) -> Vec<Finding> {
    GENERIC_RULES
        .iter()
        .filter(|r| r.class == class)
        .filter(|r| {
            let p = vocab::iri(r.property);
            if r.inverse {
                graph.matches(None, Some(&p), Some(focus)).is_empty()
            } else {
                graph.object(focus, &p).is_none()
            }
        })
        .map(|r| Finding {
            focus: focus.clone(),
            rule: r.id.to_owned(),
            severity: r.severity,
            message: format!("missing {}", r.property),
        })
        .collect()
}

fn check_system(graph: &Graph, system: &Term, library: &PatternLibrary) -> Vec<Finding> {
    let mut out = property_findings(graph, system, vocab::SYSTEM);
    let inst = Instance::extract(graph, system);
    if inst.steps.is_empty() {
        out.push(Finding {
            focus: system.clone(),
            rule: "generic/steps".into(),
            severity: Severity::Violation,
            message: "system declares no steps".into(),
        });
    }
    for pattern in graph.objects(system, &vocab::iri(vocab::HAS_CORRESPONDING_PATTERN)) {
        match library.templates().find(|t| Some(&t.iri) == pattern.as_iri()) {
            Some(template) => out.extend(ConstraintSet::derive(template).check(&inst)),
            None => out.push(Finding {
                focus: system.clone(),
                rule: "unknown-pattern".into(),
                severity: Severity::Violation,
                message: format!("unknown pattern {pattern}"),
            }),
        }
    }
    out
}

/// Check every `swemls:System` and `swemls:Paper` node in `graph`.
pub fn validate(graph: &Graph, library: &PatternLibrary) -> ValidationReport {
    let systems = graph.subjects(&vocab::iri(vocab::RDF_TYPE), &vocab::term(vocab::SYSTEM));
    let papers = graph.subjects(&vocab::iri(vocab::RDF_TYPE), &vocab::term(vocab::PAPER));
    let mut findings: Vec<Finding> =
        systems.par_iter().flat_map_iter(|s| check_system(graph, s, library)).collect();
    for paper in &papers {
        findings.extend(property_findings(graph, paper, vocab::PAPER));
    }
    findings.sort();
    ValidationReport {
        conforms: findings.iter().all(|f| f.severity != Severity::Violation),
        systems_checked: systems.len(),
        findings,
    }
}
