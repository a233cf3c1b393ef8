use std::collections::BTreeSet;

use crate::boxology::{ArtifactKind, ProcessorKind};
use crate::graph::{Graph, Iri, Term};
use crate::pattern::{VariableRole, WorkflowTemplate};
use crate::vocab;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceStep {
    pub node: Term,
    pub kind: ProcessorKind,
    pub ordinal: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceVariable {
    pub node: Term,
    /// `None` when the node carries neither resource type.
    pub kind: Option<ArtifactKind>,
    pub role: Option<VariableRole>,
}

/// The workflow-relevant part of one system description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub system: Term,
    pub steps: Vec<InstanceStep>,
    pub variables: Vec<InstanceVariable>,
    /// (step, variable) from `componentInput`.
    pub inputs: Vec<(usize, usize)>,
    /// (step, variable) from `componentOutput`.
    pub outputs: Vec<(usize, usize)>,
    /// (later, earlier) from `isPreceededBy`.
    pub precedes: Vec<(usize, usize)>,
}

const ROLE_PREDICATES: [(&str, VariableRole); 3] = [
    (vocab::HAS_SOURCE_VARIABLE, VariableRole::Source),
    (vocab::HAS_INTERMEDIATE_VARIABLE, VariableRole::Intermediate),
    (vocab::HAS_OUTPUT_VARIABLE, VariableRole::Output),
];

impl Instance {
    pub fn extract(graph: &Graph, system: &Term) -> Instance {
        let mut steps = Vec::new();
        for (pred, kind) in [(vocab::HAS_STEP_ML, ProcessorKind::Ml), (vocab::HAS_STEP_KR, ProcessorKind::Kr)] {
            for node in graph.objects(system, &vocab::iri(pred)) {
                let ordinal = graph
                    .object(&node, &vocab::iri(vocab::STEP_ORDINAL))
                    .and_then(|t| t.as_literal().and_then(|l| l.lexical().parse().ok()));
                steps.push(InstanceStep { node, kind, ordinal });
            }
        }
        steps.sort_by(|a, b| a.node.cmp(&b.node));
        steps.dedup_by(|a, b| a.node == b.node);

        let mut roles: Vec<(Term, Option<VariableRole>)> = Vec::new();
        for (pred, role) in ROLE_PREDICATES {
            for node in graph.objects(system, &vocab::iri(pred)) {
                if !roles.iter().any(|(n, _)| *n == node) {
                    roles.push((node, Some(role)));
                }
            }
        }
        for step in &steps {
            for pred in [vocab::COMPONENT_INPUT, vocab::COMPONENT_OUTPUT] {
                for node in graph.objects(&step.node, &vocab::iri(pred)) {
                    if !roles.iter().any(|(n, _)| *n == node) {
                        roles.push((node, None));
                    }
                }
            }
        }
        roles.sort();
        let sw = vocab::iri(vocab::SEMANTIC_WEB_RESOURCE);
        let data = vocab::iri(vocab::DATA_RESOURCE);
        let variables: Vec<InstanceVariable> = roles
            .into_iter()
            .map(|(node, role)| {
                let kind = match (graph.has_type(&node, &sw), graph.has_type(&node, &data)) {
                    (true, false) => Some(ArtifactKind::Sym),
                    (false, true) => Some(ArtifactKind::Data),
                    _ => None,
                };
                InstanceVariable { node, kind, role }
            })
            .collect();

        let step_idx = |t: &Term| steps.iter().position(|s| s.node == *t);
        let var_idx = |t: &Term| variables.iter().position(|v| v.node == *t);
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut precedes = Vec::new();
        for (s, step) in steps.iter().enumerate() {
            for node in graph.objects(&step.node, &vocab::iri(vocab::COMPONENT_INPUT)) {
                inputs.extend(var_idx(&node).map(|v| (s, v)));
            }
            for node in graph.objects(&step.node, &vocab::iri(vocab::COMPONENT_OUTPUT)) {
                outputs.extend(var_idx(&node).map(|v| (s, v)));
            }
            for node in graph.objects(&step.node, &vocab::iri(vocab::PPLAN_IS_PRECEEDED_BY)) {
                precedes.extend(step_idx(&node).map(|p| (s, p)));
            }
        }
        Instance { system: system.clone(), steps, variables, inputs, outputs, precedes }
    }
}

/// Instance-to-template correspondence. Pairs are (instance node, template node).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateMapping {
    pub steps: Vec<(Term, Iri)>,
    pub variables: Vec<(Term, Iri)>,
    /// More than one valid mapping exists; the first in search order is kept.
    pub ambiguous: bool,
    step_index: Vec<usize>,
    var_index: Vec<usize>,
}

impl TemplateMapping {
    /// Template step index for each instance step.
    pub fn step_index(&self) -> &[usize] {
        &self.step_index
    }

    pub fn variable_index(&self) -> &[usize] {
        &self.var_index
    }
}

struct Search<'a> {
    inst: &'a Instance,
    tpl: &'a WorkflowTemplate,
    uses: BTreeSet<(usize, usize)>,
    generates: BTreeSet<(usize, usize)>,
    precedes: BTreeSet<(usize, usize)>,
    step_map: Vec<usize>,
    var_map: Vec<usize>,
    step_used: Vec<bool>,
    var_used: Vec<bool>,
    found: Vec<(Vec<usize>, Vec<usize>)>,
    limit: usize,
}

impl Search<'_> {
    fn steps(&mut self, i: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if i == self.inst.steps.len() {
            self.vars(0);
            return;
        }
        let step = &self.inst.steps[i];
        for j in 0..self.tpl.steps.len() {
            let t = &self.tpl.steps[j];
            if self.step_used[j] || t.kind != step.kind || step.ordinal.is_some_and(|o| o != t.ordinal) {
                continue;
            }
            self.step_map[i] = j;
            // Precedence edges between already assigned steps must be template edges.
            let ok = self.inst.precedes.iter().all(|&(a, b)| {
                a > i || b > i || self.precedes.contains(&(self.step_map[a], self.step_map[b]))
            });
            if ok {
                self.step_used[j] = true;
                self.steps(i + 1);
                self.step_used[j] = false;
            }
        }
    }

    fn vars(&mut self, i: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if i == self.inst.variables.len() {
            self.found.push((self.step_map.clone(), self.var_map.clone()));
            return;
        }
        let var = &self.inst.variables[i];
        let Some(kind) = var.kind else { return };
        for j in 0..self.tpl.variables.len() {
            if self.var_used[j] || self.tpl.variables[j].kind != kind {
                continue;
            }
            if var.role.is_some_and(|r| r != self.tpl.role(j)) {
                continue;
            }
            let inputs_ok = self
                .inst
                .inputs
                .iter()
                .filter(|(_, v)| *v == i)
                .all(|&(s, _)| self.uses.contains(&(self.step_map[s], j)));
            let outputs_ok = self
                .inst
                .outputs
                .iter()
                .filter(|(_, v)| *v == i)
                .all(|&(s, _)| self.generates.contains(&(j, self.step_map[s])));
            if inputs_ok && outputs_ok {
                self.var_map[i] = j;
                self.var_used[j] = true;
                self.vars(i + 1);
                self.var_used[j] = false;
            }
        }
    }
}

/// Search for a kind-, ordinal-, role- and edge-preserving bijection between
/// the steps and variables of `system` and those of `template`.
///
/// Candidates are tried in template order for instance nodes sorted by term,
/// so the chosen mapping is deterministic.
pub fn find_mapping(graph: &Graph, system: &Term, template: &WorkflowTemplate) -> Option<TemplateMapping> {
    map_instance(&Instance::extract(graph, system), template)
}

pub fn map_instance(inst: &Instance, template: &WorkflowTemplate) -> Option<TemplateMapping> {
    if inst.steps.len() != template.steps.len() || inst.variables.len() != template.variables.len() {
        return None;
    }
    let mut search = Search {
        inst,
        tpl: template,
        uses: template.uses.iter().copied().collect(),
        generates: template.generates.iter().copied().collect(),
        precedes: template.precedes.iter().copied().collect(),
        step_map: vec![0; inst.steps.len()],
        var_map: vec![0; inst.variables.len()],
        step_used: vec![false; template.steps.len()],
        var_used: vec![false; template.variables.len()],
        found: Vec::new(),
        limit: 2,
    };
    search.steps(0);
    let ambiguous = search.found.len() > 1;
    let (step_index, var_index) = search.found.into_iter().next()?;
    Some(TemplateMapping {
        steps: inst
            .steps
            .iter()
            .zip(&step_index)
            .map(|(s, &j)| (s.node.clone(), template.steps[j].iri.clone()))
            .collect(),
        variables: inst
            .variables
            .iter()
            .zip(&var_index)
            .map(|(v, &j)| (v.node.clone(), template.variables[j].iri.clone()))
            .collect(),
        ambiguous,
        step_index,
        var_index,
    })
}

/// Edges the template prescribes for the instance under `mapping`, as
/// (subject, predicate, object) triples of instance nodes.
pub fn template_image(inst: &Instance, template: &WorkflowTemplate, mapping: &TemplateMapping) -> Vec<(Term, Iri, Term)> {
    let step_of = |j: usize| &inst.steps[mapping.step_index.iter().position(|&x| x == j).unwrap()].node;
    let var_of = |j: usize| &inst.variables[mapping.var_index.iter().position(|&x| x == j).unwrap()].node;
    let mut out = Vec::new();
    for &(s, v) in &template.uses {
        out.push((step_of(s).clone(), vocab::iri(vocab::COMPONENT_INPUT), var_of(v).clone()));
    }
    for &(v, s) in &template.generates {
        out.push((step_of(s).clone(), vocab::iri(vocab::COMPONENT_OUTPUT), var_of(v).clone()));
    }
    for &(a, b) in &template.precedes {
        out.push((step_of(a).clone(), vocab::iri(vocab::PPLAN_IS_PRECEEDED_BY), step_of(b).clone()));
    }
    out.sort();
    out
}
