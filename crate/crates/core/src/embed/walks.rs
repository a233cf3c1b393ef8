use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::graph::{Graph, Term};

/// Corpus token of a term: the bare IRI text, or the N-Triples form of a
/// literal or blank node.
pub fn token(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri.as_str().to_owned(),
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub walks_per_entity: usize,
    pub depth: usize,
    pub seed: u64,
    /// Generate per-entity walks on the rayon pool. The corpus is identical
    /// either way.
    pub parallel: bool,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { walks_per_entity: 50, depth: 4, seed: 42, parallel: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    /// Start entity; always `tokens[0]`.
    pub entity: String,
    /// Seed of the entity's generator, derived from the corpus seed and the
    /// entity.
    pub entity_seed: u64,
    /// Alternating node, predicate, node, ... tokens.
    pub tokens: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCorpus {
    pub config: WalkConfig,
    pub walks: Vec<Walk>,
}

impl WalkCorpus {
    pub fn token_count(&self) -> usize {
        self.walks.iter().map(|w| w.tokens.len()).sum()
    }
}

pub fn entity_seed(seed: u64, entity: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(entity.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

fn walks_from(graph: &Graph, start: &Term, config: &WalkConfig) -> Vec<Walk> {
    let entity = token(start);
    let entity_seed = entity_seed(config.seed, &entity);
    let mut rng = ChaCha8Rng::seed_from_u64(entity_seed);
    (0..config.walks_per_entity)
        .map(|_| {
            let mut tokens = vec![entity.clone()];
            let mut current = start.clone();
            for _ in 0..config.depth {
                let out = graph.outgoing(&current);
                if out.is_empty() {
                    break;
                }
                let (p, o) = &out[rng.gen_range(0..out.len())];
                tokens.push(p.as_str().to_owned());
                tokens.push(token(o));
                current = o.clone();
            }
            Walk { entity: entity.clone(), entity_seed, tokens }
        })
        .collect()
}

/// `walks_per_entity` random walks of at most `depth` hops from every IRI
/// subject, in subject order. Each hop picks an outgoing edge uniformly; a
/// node without outgoing edges ends the walk.
pub fn generate_walks(graph: &Graph, config: &WalkConfig) -> WalkCorpus {
    let starts: Vec<&Term> = graph.subject_terms().filter(|t| matches!(t, Term::Iri(_))).collect();
    let per_entity: Vec<Vec<Walk>> = if config.parallel {
        starts.par_iter().map(|s| walks_from(graph, s, config)).collect()
    } else {
        starts.iter().map(|s| walks_from(graph, s, config)).collect()
    };
    WalkCorpus { config: *config, walks: per_entity.into_iter().flatten().collect() }
}
