//! Random workflow instances of a template and an exhaustive search over
//! every kind-preserving bijection.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use swemls_core::boxology::{ArtifactKind, ProcessorKind};
use swemls_core::graph::{Graph, Iri, Literal, Term, Triple};
use swemls_core::pattern::{VariableRole, WorkflowTemplate};
use swemls_core::vocab;

#[derive(Clone, Debug)]
pub struct StepSpec {
    pub name: String,
    pub kind: ProcessorKind,
    pub ordinal: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct VarSpec {
    pub name: String,
    pub kind: Option<ArtifactKind>,
    pub role: Option<VariableRole>,
}

/// A system description: steps, variables and dataflow edges by index.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub steps: Vec<StepSpec>,
    pub vars: Vec<VarSpec>,
    /// (step, var)
    pub inputs: Vec<(usize, usize)>,
    /// (step, var)
    pub outputs: Vec<(usize, usize)>,
    /// (later step, earlier step)
    pub precedes: Vec<(usize, usize)>,
}

pub const SYSTEM: &str = "http://ex.org/system";

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

fn node(name: &str) -> Term {
    Term::Iri(iri(&format!("http://ex.org/{name}")))
}

fn add(g: &mut Graph, s: Term, p: &str, o: Term) {
    g.insert(Triple::new(s, iri(p), o).unwrap());
}

impl InstanceSpec {
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        let system = Term::Iri(iri(SYSTEM));
        for s in &self.steps {
            let p = match s.kind {
                ProcessorKind::Ml => vocab::HAS_STEP_ML,
                ProcessorKind::Kr => vocab::HAS_STEP_KR,
            };
            add(&mut g, system.clone(), p, node(&s.name));
            if let Some(o) = s.ordinal {
                add(&mut g, node(&s.name), vocab::STEP_ORDINAL, Term::Literal(Literal::integer(o as i64)));
            }
        }
        for v in &self.vars {
            if let Some(kind) = v.kind {
                let class = match kind {
                    ArtifactKind::Sym => vocab::SEMANTIC_WEB_RESOURCE,
                    ArtifactKind::Data => vocab::DATA_RESOURCE,
                };
                add(&mut g, node(&v.name), vocab::RDF_TYPE, Term::Iri(iri(class)));
            }
            if let Some(role) = v.role {
                let p = match role {
                    VariableRole::Source => vocab::HAS_SOURCE_VARIABLE,
                    VariableRole::Intermediate => vocab::HAS_INTERMEDIATE_VARIABLE,
                    VariableRole::Output => vocab::HAS_OUTPUT_VARIABLE,
                };
                add(&mut g, system.clone(), p, node(&v.name));
            }
        }
        for &(s, v) in &self.inputs {
            add(&mut g, node(&self.steps[s].name), vocab::COMPONENT_INPUT, node(&self.vars[v].name));
        }
        for &(s, v) in &self.outputs {
            add(&mut g, node(&self.steps[s].name), vocab::COMPONENT_OUTPUT, node(&self.vars[v].name));
        }
        for &(a, b) in &self.precedes {
            add(&mut g, node(&self.steps[a].name), vocab::PPLAN_IS_PRECEEDED_BY, node(&self.steps[b].name));
        }
        g
    }
}

/// Role of a template variable from its edges: never generated is a
/// source, generated and consumed is intermediate, otherwise output.
pub fn template_role(t: &WorkflowTemplate, var: usize) -> VariableRole {
    let generated = t.generates.iter().any(|&(v, _)| v == var);
    let consumed = t.uses.iter().any(|&(_, v)| v == var);
    match (generated, consumed) {
        (false, _) => VariableRole::Source,
        (true, true) => VariableRole::Intermediate,
        (true, false) => VariableRole::Output,
    }
}

/// An instance that conforms to `t`: node names are shuffled, and each
/// ordinal, role and template edge is kept or dropped at random. Every
/// variable stays reachable through a role or an edge.
pub fn random_instance(rng: &mut ChaCha8Rng, t: &WorkflowTemplate) -> InstanceSpec {
    let mut step_names: Vec<usize> = (0..t.steps.len()).collect();
    step_names.shuffle(rng);
    let mut var_names: Vec<usize> = (0..t.variables.len()).collect();
    var_names.shuffle(rng);
    let keep_ordinals = rng.gen_bool(0.5);
    let steps = t
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| StepSpec {
            name: format!("step{}", step_names[i]),
            kind: s.kind,
            ordinal: (keep_ordinals && rng.gen_bool(0.7)).then_some(s.ordinal),
        })
        .collect();
    let edge_rate = [0.0, 0.5, 1.0][rng.gen_range(0..3)];
    let inputs: Vec<(usize, usize)> = t.uses.iter().copied().filter(|_| rng.gen_bool(edge_rate)).collect();
    let outputs: Vec<(usize, usize)> =
        t.generates.iter().map(|&(v, s)| (s, v)).filter(|_| rng.gen_bool(edge_rate)).collect();
    let precedes: Vec<(usize, usize)> = t.precedes.iter().copied().filter(|_| rng.gen_bool(edge_rate)).collect();
    let vars = t
        .variables
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let attached = inputs.iter().chain(&outputs).any(|&(_, x)| x == i);
            VarSpec {
                name: format!("var{}", var_names[i]),
                kind: Some(v.kind),
                role: (!attached || rng.gen_bool(0.5)).then(|| template_role(t, i)),
            }
        })
        .collect();
    InstanceSpec { steps, vars, inputs, outputs, precedes }
}

/// Mutations that leave no valid mapping. Returns the mutated instance and
/// a description of the change.
pub fn mutate(rng: &mut ChaCha8Rng, t: &WorkflowTemplate, inst: &InstanceSpec) -> (InstanceSpec, &'static str) {
    let mut m = inst.clone();
    loop {
        match rng.gen_range(0..5) {
            0 => {
                m.steps.push(StepSpec { name: "extra-step".into(), kind: ProcessorKind::Ml, ordinal: None });
                return (m, "extra step");
            }
            1 => {
                let v = rng.gen_range(0..m.vars.len());
                m.vars[v].kind = m.vars[v].kind.map(|k| match k {
                    ArtifactKind::Sym => ArtifactKind::Data,
                    ArtifactKind::Data => ArtifactKind::Sym,
                });
                return (m, "variable kind flipped");
            }
            2 => {
                m.vars.push(VarSpec {
                    name: "extra-var".into(),
                    kind: Some(ArtifactKind::Sym),
                    role: Some(VariableRole::Source),
                });
                return (m, "extra variable");
            }
            3 => {
                let s = rng.gen_range(0..m.steps.len());
                m.steps[s].ordinal = Some(t.steps.len() + 1);
                return (m, "impossible ordinal");
            }
            _ => {
                let v = rng.gen_range(0..m.vars.len());
                m.vars[v].kind = None;
                if m.vars[v].role.is_none() && !m.inputs.iter().chain(&m.outputs).any(|&(_, x)| x == v) {
                    continue;
                }
                return (m, "untyped variable");
            }
        }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Every assignment of instance items to template items of the same class;
/// `None` when the class sizes differ.
fn class_bijections<K: PartialEq + Copy>(inst: &[K], tpl: &[K]) -> Option<Vec<Vec<usize>>> {
    let mut classes: Vec<K> = Vec::new();
    for k in inst.iter().chain(tpl) {
        if !classes.contains(k) {
            classes.push(*k);
        }
    }
    let mut result: Vec<Vec<usize>> = vec![vec![usize::MAX; inst.len()]];
    for class in classes {
        let from: Vec<usize> = (0..inst.len()).filter(|&i| inst[i] == class).collect();
        let to: Vec<usize> = (0..tpl.len()).filter(|&j| tpl[j] == class).collect();
        if from.len() != to.len() {
            return None;
        }
        let perms = permutations(&to);
        let mut next = Vec::new();
        for partial in &result {
            for p in &perms {
                let mut m = partial.clone();
                for (&i, &j) in from.iter().zip(p) {
                    m[i] = j;
                }
                next.push(m);
            }
        }
        result = next;
    }
    Some(result)
}

/// Number of valid (step, variable) bijections, capped at `limit`.
pub fn count_mappings(t: &WorkflowTemplate, inst: &InstanceSpec, limit: usize) -> usize {
    if inst.vars.iter().any(|v| v.kind.is_none()) {
        return 0;
    }
    let inst_step_kinds: Vec<ProcessorKind> = inst.steps.iter().map(|s| s.kind).collect();
    let tpl_step_kinds: Vec<ProcessorKind> = t.steps.iter().map(|s| s.kind).collect();
    let inst_var_kinds: Vec<ArtifactKind> = inst.vars.iter().map(|v| v.kind.unwrap()).collect();
    let tpl_var_kinds: Vec<ArtifactKind> = t.variables.iter().map(|v| v.kind).collect();
    let (Some(step_maps), Some(var_maps)) =
        (class_bijections(&inst_step_kinds, &tpl_step_kinds), class_bijections(&inst_var_kinds, &tpl_var_kinds))
    else {
        return 0;
    };
    let mut count = 0;
    for sm in step_maps.iter().filter(|sm| steps_ok(t, inst, sm)) {
        for vm in &var_maps {
            if vars_ok(t, inst, sm, vm) {
                count += 1;
                if count >= limit {
                    return count;
                }
            }
        }
    }
    count
}

fn steps_ok(t: &WorkflowTemplate, inst: &InstanceSpec, sm: &[usize]) -> bool {
    inst.steps.iter().enumerate().all(|(i, s)| s.ordinal.is_none_or(|o| o == t.steps[sm[i]].ordinal))
        && inst.precedes.iter().all(|&(a, b)| t.precedes.contains(&(sm[a], sm[b])))
}

fn vars_ok(t: &WorkflowTemplate, inst: &InstanceSpec, sm: &[usize], vm: &[usize]) -> bool {
    inst.vars.iter().enumerate().all(|(i, v)| v.role.is_none_or(|r| r == template_role(t, vm[i])))
        && inst.inputs.iter().all(|&(s, v)| t.uses.contains(&(sm[s], vm[v])))
        && inst.outputs.iter().all(|&(s, v)| t.generates.contains(&(vm[v], sm[s])))
}

/// Checks one candidate mapping given as (instance node, template node)
/// pairs.
pub fn is_valid_mapping(t: &WorkflowTemplate, inst: &InstanceSpec, steps: &[(Term, Iri)], vars: &[(Term, Iri)]) -> bool {
    fn index<F: Fn(usize) -> String>(len: usize, name: F, pairs: &[(Term, Iri)], tpl: &[Iri]) -> Option<Vec<usize>> {
        let mut out = vec![usize::MAX; len];
        for (i, slot) in out.iter_mut().enumerate() {
            let wanted = node(&name(i));
            let (_, target) = pairs.iter().find(|(n, _)| *n == wanted)?;
            *slot = tpl.iter().position(|x| x == target)?;
        }
        let distinct: std::collections::BTreeSet<usize> = out.iter().copied().collect();
        (distinct.len() == len).then_some(out)
    }
    let tpl_steps: Vec<Iri> = t.steps.iter().map(|s| s.iri.clone()).collect();
    let tpl_vars: Vec<Iri> = t.variables.iter().map(|v| v.iri.clone()).collect();
    let (Some(sm), Some(vm)) = (
        index(inst.steps.len(), |i| inst.steps[i].name.clone(), steps, &tpl_steps),
        index(inst.vars.len(), |i| inst.vars[i].name.clone(), vars, &tpl_vars),
    ) else {
        return false;
    };
    let kinds = inst.steps.iter().zip(&sm).all(|(s, &j)| s.kind == t.steps[j].kind)
        && inst.vars.iter().zip(&vm).all(|(v, &j)| v.kind == Some(t.variables[j].kind));
    kinds && steps_ok(t, inst, &sm) && vars_ok(t, inst, &sm, &vm)
}
