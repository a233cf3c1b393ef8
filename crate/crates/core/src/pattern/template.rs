use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::boxology::{ArtifactKind, Flow, PatternAst, ProcessorKind, Stage};
use crate::graph::{Graph, Iri, Literal, Term};
use crate::vocab;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateStep {
    pub iri: Iri,
    pub kind: ProcessorKind,
    /// 1-based position among steps of the same kind.
    pub ordinal: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateVariable {
    pub iri: Iri,
    pub kind: ArtifactKind,
    pub ordinal: usize,
}

/// How a variable participates in the dataflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableRole {
    /// Not generated by any step.
    Source,
    /// Generated by a step and consumed by another.
    Intermediate,
    /// Generated and never consumed.
    Output,
}

/// A compiled workflow template. Steps and variables are kept sorted by
/// (kind, ordinal); edges refer to them by index and are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkflowTemplate {
    pub id: String,
    pub iri: Iri,
    pub notation: Option<String>,
    pub steps: Vec<TemplateStep>,
    pub variables: Vec<TemplateVariable>,
    /// (step, variable): the step reads the variable.
    pub uses: Vec<(usize, usize)>,
    /// (variable, step): the variable is generated by the step.
    pub generates: Vec<(usize, usize)>,
    /// (later, earlier): `later isPreceededBy earlier`.
    pub precedes: Vec<(usize, usize)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("pattern id {0:?} must match [A-Za-z0-9-]+")]
    InvalidId(String),
    #[error("pattern ends in a parallel group with no stage to merge into")]
    TrailingGroup,
    #[error("artifact `{0}` follows another artifact without a processor in between")]
    AdjacentArtifacts(&'static str),
    #[error("processor `{0}` has no input artifact or preceding processor")]
    ProcessorWithoutInput(&'static str),
    #[error("artifact `{0}` would be generated by more than one processor")]
    MultipleGenerators(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error("expected exactly one opmw:WorkflowTemplate node, found {0}")]
    TemplateCount(usize),
    #[error("template {0} has no rdfs:label")]
    MissingLabel(String),
    #[error("{0} must have exactly one of the step types ProcessML/ProcessKR")]
    StepKind(String),
    #[error("{0} must have exactly one of the variable types TemplateArtifactSW/TemplateArtifactData")]
    VariableKind(String),
    #[error("edge {0} refers to a node outside the template")]
    DanglingEdge(String),
    #[error("variable {0} has {1} generators")]
    Generators(String, usize),
    #[error("step {0} has no inputs and no predecessor")]
    NoInputs(String),
    #[error("precedence edges contain a cycle")]
    Cycle,
}

/// Strip hyphens after checking the id alphabet: `T-3` → `T3`.
pub fn normalize_id(id: &str) -> Result<String, CompileError> {
    if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
        return Err(CompileError::InvalidId(id.to_owned()));
    }
    let stripped: String = id.chars().filter(|c| *c != '-').collect();
    if stripped.is_empty() {
        return Err(CompileError::InvalidId(id.to_owned()));
    }
    Ok(stripped)
}

pub fn template_iri(id: &str) -> Iri {
    vocab::res(&format!("Pattern.{id}"))
}

#[derive(Clone, Default)]
struct Frontier {
    artifacts: Vec<usize>,
    steps: Vec<usize>,
}

#[derive(Default)]
struct Builder {
    steps: Vec<ProcessorKind>,
    vars: Vec<(ArtifactKind, Option<usize>)>,
    uses: Vec<(usize, usize)>,
    precedes: Vec<(usize, usize)>,
}

impl Builder {
    fn flow(&mut self, flow: &Flow, mut front: Frontier) -> Result<Frontier, CompileError> {
        for stage in flow.stages() {
            front = match stage {
                Stage::Artifact(kind) => {
                    if !front.artifacts.is_empty() {
                        return Err(CompileError::AdjacentArtifacts(kind.token()));
                    }
                    let generator = match front.steps.as_slice() {
                        [] => None,
                        [s] => Some(*s),
                        _ => return Err(CompileError::MultipleGenerators(kind.token())),
                    };
                    self.vars.push((*kind, generator));
                    Frontier { artifacts: vec![self.vars.len() - 1], steps: front.steps }
                }
                Stage::Processor(kind) => {
                    if front.artifacts.is_empty() && front.steps.is_empty() {
                        return Err(CompileError::ProcessorWithoutInput(kind.token()));
                    }
                    self.steps.push(*kind);
                    let step = self.steps.len() - 1;
                    self.uses.extend(front.artifacts.iter().map(|&v| (step, v)));
                    self.precedes.extend(front.steps.iter().map(|&p| (step, p)));
                    Frontier { artifacts: vec![], steps: vec![step] }
                }
                Stage::Group(branches) => {
                    let mut merged = Frontier::default();
                    for branch in branches {
                        let out = self.flow(branch, front.clone())?;
                        merged.artifacts.extend(out.artifacts);
                        for s in out.steps {
                            if !merged.steps.contains(&s) {
                                merged.steps.push(s);
                            }
                        }
                    }
                    merged
                }
            };
        }
        Ok(front)
    }
}

/// Compile a pattern AST into a template.
///
/// Variables are numbered per kind: source variables first in order of
/// appearance, then generated ones. Steps are numbered per kind left to right.
pub fn build_template(id: &str, ast: &PatternAst) -> Result<WorkflowTemplate, CompileError> {
    let id = normalize_id(id)?;
    if matches!(ast.root.stages().last(), Some(Stage::Group(_))) {
        return Err(CompileError::TrailingGroup);
    }
    let mut b = Builder::default();
    b.flow(&ast.root, Frontier::default())?;

    let iri = template_iri(&id);
    let mut step_counters: BTreeMap<ProcessorKind, usize> = BTreeMap::new();
    let step_ordinals: Vec<usize> = b
        .steps
        .iter()
        .map(|k| {
            let c = step_counters.entry(*k).or_default();
            *c += 1;
            *c
        })
        .collect();

    let mut var_ordinals = vec![0; b.vars.len()];
    let mut var_counters: BTreeMap<ArtifactKind, usize> = BTreeMap::new();
    let sources = b.vars.iter().enumerate().filter(|(_, (_, g))| g.is_none());
    let generated = b.vars.iter().enumerate().filter(|(_, (_, g))| g.is_some());
    for (i, (kind, _)) in sources.chain(generated) {
        let c = var_counters.entry(*kind).or_default();
        *c += 1;
        var_ordinals[i] = *c;
    }

    let steps: Vec<TemplateStep> = b
        .steps
        .iter()
        .zip(&step_ordinals)
        .map(|(kind, ord)| TemplateStep {
            iri: vocab::res(&format!("Pattern.{id}.{}{ord}", kind.token())),
            kind: *kind,
            ordinal: *ord,
        })
        .collect();
    let variables: Vec<TemplateVariable> = b
        .vars
        .iter()
        .zip(&var_ordinals)
        .map(|((kind, _), ord)| TemplateVariable {
            iri: vocab::res(&format!("Pattern.{id}.{}{ord}", kind.label())),
            kind: *kind,
            ordinal: *ord,
        })
        .collect();
    let generates = b.vars.iter().enumerate().filter_map(|(v, (_, g))| g.map(|s| (v, s))).collect();

    Ok(WorkflowTemplate {
        id,
        iri,
        notation: Some(ast.to_string()),
        steps,
        variables,
        uses: b.uses,
        generates,
        precedes: b.precedes,
    }
    .normalized())
}

/// Compile straight to the graph form written to pattern files.
pub fn compile_template(id: &str, ast: &PatternAst) -> Result<Graph, CompileError> {
    Ok(build_template(id, ast)?.to_graph())
}

fn step_class(kind: ProcessorKind) -> &'static str {
    match kind {
        ProcessorKind::Ml => vocab::WORKFLOW_TEMPLATE_PROCESS_ML,
        ProcessorKind::Kr => vocab::WORKFLOW_TEMPLATE_PROCESS_KR,
    }
}

fn variable_class(kind: ArtifactKind) -> &'static str {
    match kind {
        ArtifactKind::Sym => vocab::TEMPLATE_ARTIFACT_SW,
        ArtifactKind::Data => vocab::TEMPLATE_ARTIFACT_DATA,
    }
}

/// Trailing decimal digits of the last dotted segment, e.g. `...T3.ML2` → 2.
fn trailing_number(iri: &Iri) -> Option<usize> {
    let seg = iri.as_str().rsplit(['.', '/', '#']).next()?;
    let digits: String = seg.chars().rev().take_while(|c| c.is_ascii_digit()).collect();
    digits.chars().rev().collect::<String>().parse().ok()
}

impl WorkflowTemplate {
    /// Sort nodes by (kind, ordinal) and remap edges.
    fn normalized(mut self) -> Self {
        let mut step_order: Vec<usize> = (0..self.steps.len()).collect();
        step_order.sort_by_key(|&i| (self.steps[i].kind, self.steps[i].ordinal, self.steps[i].iri.clone()));
        let mut var_order: Vec<usize> = (0..self.variables.len()).collect();
        var_order.sort_by_key(|&i| (self.variables[i].kind, self.variables[i].ordinal, self.variables[i].iri.clone()));
        let mut step_pos = vec![0; step_order.len()];
        for (new, &old) in step_order.iter().enumerate() {
            step_pos[old] = new;
        }
        let mut var_pos = vec![0; var_order.len()];
        for (new, &old) in var_order.iter().enumerate() {
            var_pos[old] = new;
        }
        self.steps = step_order.iter().map(|&i| self.steps[i].clone()).collect();
        self.variables = var_order.iter().map(|&i| self.variables[i].clone()).collect();
        self.uses = sorted_unique(self.uses.iter().map(|&(s, v)| (step_pos[s], var_pos[v])));
        self.generates = sorted_unique(self.generates.iter().map(|&(v, s)| (var_pos[v], step_pos[s])));
        self.precedes = sorted_unique(self.precedes.iter().map(|&(a, b)| (step_pos[a], step_pos[b])));
        self
    }

    pub fn generator(&self, var: usize) -> Option<usize> {
        self.generates.iter().find(|(v, _)| *v == var).map(|(_, s)| *s)
    }

    pub fn role(&self, var: usize) -> VariableRole {
        match self.generator(var) {
            None => VariableRole::Source,
            Some(_) if self.uses.iter().any(|(_, v)| *v == var) => VariableRole::Intermediate,
            Some(_) => VariableRole::Output,
        }
    }

    pub fn step_count(&self, kind: ProcessorKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    pub fn variable_count(&self, kind: ArtifactKind) -> usize {
        self.variables.iter().filter(|v| v.kind == kind).count()
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        *g.prefixes_mut() = vocab::default_prefixes();
        let ty = vocab::iri(vocab::RDF_TYPE);
        let tpl = Term::Iri(self.iri.clone());
        g.add(&tpl, &ty, vocab::term(vocab::OPMW_WORKFLOW_TEMPLATE));
        g.add(&tpl, &vocab::iri(vocab::RDFS_LABEL), Literal::plain(&self.id));
        if let Some(n) = &self.notation {
            g.add(&tpl, &vocab::iri(vocab::RDFS_COMMENT), Literal::plain(n));
        }
        for step in &self.steps {
            let s = Term::Iri(step.iri.clone());
            g.add(&s, &ty, vocab::term(step_class(step.kind)));
            g.add(&s, &vocab::iri(vocab::OPMW_IS_STEP_OF_TEMPLATE), tpl.clone());
        }
        for var in &self.variables {
            let v = Term::Iri(var.iri.clone());
            g.add(&v, &ty, vocab::term(variable_class(var.kind)));
            g.add(&v, &vocab::iri(vocab::OPMW_IS_VARIABLE_OF_TEMPLATE), tpl.clone());
        }
        for &(s, v) in &self.uses {
            g.add(&Term::Iri(self.steps[s].iri.clone()), &vocab::iri(vocab::OPMW_USES), self.variables[v].iri.clone());
        }
        for &(v, s) in &self.generates {
            g.add(
                &Term::Iri(self.variables[v].iri.clone()),
                &vocab::iri(vocab::OPMW_IS_GENERATED_BY),
                self.steps[s].iri.clone(),
            );
        }
        for &(a, b) in &self.precedes {
            g.add(
                &Term::Iri(self.steps[a].iri.clone()),
                &vocab::iri(vocab::PPLAN_IS_PRECEEDED_BY),
                self.steps[b].iri.clone(),
            );
        }
        g
    }

    /// Read a template back from its graph form and check well-formedness.
    pub fn from_graph(graph: &Graph) -> Result<Self, TemplateError> {
        let ty = vocab::iri(vocab::RDF_TYPE);
        let templates = graph.subjects(&ty, &vocab::term(vocab::OPMW_WORKFLOW_TEMPLATE));
        let [tpl] = templates.as_slice() else {
            return Err(TemplateError::TemplateCount(templates.len()));
        };
        let Term::Iri(iri) = tpl else {
            return Err(TemplateError::TemplateCount(0));
        };
        let id = graph
            .object(tpl, &vocab::iri(vocab::RDFS_LABEL))
            .and_then(|t| t.as_literal().map(|l| l.lexical().to_owned()))
            .ok_or_else(|| TemplateError::MissingLabel(iri.to_string()))?;
        let notation = graph
            .object(tpl, &vocab::iri(vocab::RDFS_COMMENT))
            .and_then(|t| t.as_literal().map(|l| l.lexical().to_owned()));

        let mut steps = Vec::new();
        for node in graph.subjects(&vocab::iri(vocab::OPMW_IS_STEP_OF_TEMPLATE), tpl) {
            let ml = graph.has_type(&node, &vocab::iri(vocab::WORKFLOW_TEMPLATE_PROCESS_ML));
            let kr = graph.has_type(&node, &vocab::iri(vocab::WORKFLOW_TEMPLATE_PROCESS_KR));
            let kind = match (ml, kr, &node) {
                (true, false, Term::Iri(_)) => ProcessorKind::Ml,
                (false, true, Term::Iri(_)) => ProcessorKind::Kr,
                _ => return Err(TemplateError::StepKind(node.to_string())),
            };
            steps.push((node.as_iri().unwrap().clone(), kind));
        }
        let mut variables = Vec::new();
        for node in graph.subjects(&vocab::iri(vocab::OPMW_IS_VARIABLE_OF_TEMPLATE), tpl) {
            let sw = graph.has_type(&node, &vocab::iri(vocab::TEMPLATE_ARTIFACT_SW));
            let data = graph.has_type(&node, &vocab::iri(vocab::TEMPLATE_ARTIFACT_DATA));
            let kind = match (sw, data, &node) {
                (true, false, Term::Iri(_)) => ArtifactKind::Sym,
                (false, true, Term::Iri(_)) => ArtifactKind::Data,
                _ => return Err(TemplateError::VariableKind(node.to_string())),
            };
            variables.push((node.as_iri().unwrap().clone(), kind));
        }

        let steps = assign_ordinals(steps)
            .into_iter()
            .map(|(iri, kind, ordinal)| TemplateStep { iri, kind, ordinal })
            .collect::<Vec<_>>();
        let variables = assign_ordinals(variables)
            .into_iter()
            .map(|(iri, kind, ordinal)| TemplateVariable { iri, kind, ordinal })
            .collect::<Vec<_>>();

        let step_idx = |t: &Term| steps.iter().position(|s| Some(&s.iri) == t.as_iri());
        let var_idx = |t: &Term| variables.iter().position(|v| Some(&v.iri) == t.as_iri());
        let mut uses = Vec::new();
        let mut generates = Vec::new();
        let mut precedes = Vec::new();
        for t in graph.matches(None, Some(&vocab::iri(vocab::OPMW_USES)), None) {
            match (step_idx(&t.subject), var_idx(&t.object)) {
                (Some(s), Some(v)) => uses.push((s, v)),
                _ => return Err(TemplateError::DanglingEdge(t.to_string())),
            }
        }
        for t in graph.matches(None, Some(&vocab::iri(vocab::OPMW_IS_GENERATED_BY)), None) {
            match (var_idx(&t.subject), step_idx(&t.object)) {
                (Some(v), Some(s)) => generates.push((v, s)),
                _ => return Err(TemplateError::DanglingEdge(t.to_string())),
            }
        }
        for t in graph.matches(None, Some(&vocab::iri(vocab::PPLAN_IS_PRECEEDED_BY)), None) {
            match (step_idx(&t.subject), step_idx(&t.object)) {
                (Some(a), Some(b)) => precedes.push((a, b)),
                _ => return Err(TemplateError::DanglingEdge(t.to_string())),
            }
        }
        let template =
            WorkflowTemplate { id, iri: iri.clone(), notation, steps, variables, uses, generates, precedes }.normalized();
        template.check_well_formed()?;
        Ok(template)
    }

    pub fn check_well_formed(&self) -> Result<(), TemplateError> {
        for (v, var) in self.variables.iter().enumerate() {
            let n = self.generates.iter().filter(|(x, _)| *x == v).count();
            if n > 1 {
                return Err(TemplateError::Generators(var.iri.to_string(), n));
            }
        }
        for (s, step) in self.steps.iter().enumerate() {
            let has_input = self.uses.iter().any(|(x, _)| *x == s);
            let has_pred = self.precedes.iter().any(|(x, _)| *x == s);
            if !has_input && !has_pred {
                return Err(TemplateError::NoInputs(step.iri.to_string()));
            }
        }
        // Kahn's algorithm over precedence edges.
        let n = self.steps.len();
        let mut indegree = vec![0usize; n];
        for &(later, _) in &self.precedes {
            indegree[later] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = ready.pop() {
            seen += 1;
            for &(later, earlier) in &self.precedes {
                if earlier == i {
                    indegree[later] -= 1;
                    if indegree[later] == 0 {
                        ready.push(later);
                    }
                }
            }
        }
        if seen != n {
            return Err(TemplateError::Cycle);
        }
        Ok(())
    }

    /// Structural equality up to renaming of step and variable IRIs.
    pub fn is_isomorphic(&self, other: &WorkflowTemplate) -> bool {
        if self.steps.len() != other.steps.len()
            || self.variables.len() != other.variables.len()
            || self.uses.len() != other.uses.len()
            || self.generates.len() != other.generates.len()
            || self.precedes.len() != other.precedes.len()
        {
            return false;
        }
        let mut step_map = vec![usize::MAX; self.steps.len()];
        let mut used = vec![false; other.steps.len()];
        self.iso_steps(other, 0, &mut step_map, &mut used)
    }

    fn iso_steps(&self, other: &Self, i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == self.steps.len() {
            let prec: BTreeSet<_> = self.precedes.iter().map(|&(a, b)| (map[a], map[b])).collect();
            if prec != other.precedes.iter().copied().collect() {
                return false;
            }
            let mut var_map = vec![usize::MAX; self.variables.len()];
            let mut vused = vec![false; other.variables.len()];
            return self.iso_vars(other, 0, map, &mut var_map, &mut vused);
        }
        for j in 0..other.steps.len() {
            if !used[j] && other.steps[j].kind == self.steps[i].kind {
                used[j] = true;
                map[i] = j;
                if self.iso_steps(other, i + 1, map, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }

    fn iso_vars(&self, other: &Self, i: usize, smap: &[usize], vmap: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == self.variables.len() {
            let uses: BTreeSet<_> = self.uses.iter().map(|&(s, v)| (smap[s], vmap[v])).collect();
            let gens: BTreeSet<_> = self.generates.iter().map(|&(v, s)| (vmap[v], smap[s])).collect();
            return uses == other.uses.iter().copied().collect() && gens == other.generates.iter().copied().collect();
        }
        for j in 0..other.variables.len() {
            if !used[j] && other.variables[j].kind == self.variables[i].kind {
                used[j] = true;
                vmap[i] = j;
                if self.iso_vars(other, i + 1, smap, vmap, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
}

fn sorted_unique<T: Ord>(items: impl Iterator<Item = T>) -> Vec<T> {
    items.collect::<BTreeSet<_>>().into_iter().collect()
}

fn assign_ordinals<K: Ord + Copy>(mut nodes: Vec<(Iri, K)>) -> Vec<(Iri, K, usize)> {
    nodes.sort_by(|a, b| (a.1, trailing_number(&a.0), &a.0).cmp(&(b.1, trailing_number(&b.0), &b.0)));
    let mut counters: BTreeMap<K, usize> = BTreeMap::new();
    nodes
        .into_iter()
        .map(|(iri, kind)| {
            let c = counters.entry(kind).or_default();
            *c += 1;
            (iri, kind, *c)
        })
        .collect()
}
