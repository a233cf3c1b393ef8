use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use swemls_core::boxology::{ArtifactKind, Flow, PatternAst, ProcessorKind, Stage};
use swemls_core::graph::{Graph, Iri, Literal, Term, Triple};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn leaf(rng: &mut ChaCha8Rng) -> Stage {
    match rng.gen_range(0..4) {
        0 => Stage::Artifact(ArtifactKind::Sym),
        1 => Stage::Artifact(ArtifactKind::Data),
        2 => Stage::Processor(ProcessorKind::Ml),
        _ => Stage::Processor(ProcessorKind::Kr),
    }
}

/// A random flow whose groups nest at most `depth` levels.
pub fn random_flow(rng: &mut ChaCha8Rng, depth: u32) -> Flow {
    let len = rng.gen_range(1..=4);
    let stages = (0..len)
        .map(|_| {
            if depth > 0 && rng.gen_bool(0.25) {
                let branches = rng.gen_range(2..=3);
                Stage::Group((0..branches).map(|_| random_flow(rng, depth - 1)).collect())
            } else {
                leaf(rng)
            }
        })
        .collect();
    Flow(stages)
}

pub fn random_ast(rng: &mut ChaCha8Rng, depth: u32) -> PatternAst {
    PatternAst { root: random_flow(rng, depth) }
}

pub fn nesting_depth(flow: &Flow) -> u32 {
    flow.0
        .iter()
        .map(|s| match s {
            Stage::Group(bs) => 1 + bs.iter().map(nesting_depth).max().unwrap_or(0),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

/// Notation built only from well-formed alternations of artifacts and
/// processors: `sym -> P -> x -> P -> ...`, optionally opening with a group of
/// such chains. Always compiles.
pub fn random_valid_notation(rng: &mut ChaCha8Rng, max_processors: usize) -> String {
    fn art(rng: &mut ChaCha8Rng) -> &'static str {
        if rng.gen_bool(0.6) {
            "sym"
        } else {
            "data"
        }
    }
    fn proc(rng: &mut ChaCha8Rng) -> &'static str {
        if rng.gen_bool(0.7) {
            "ML"
        } else {
            "KR"
        }
    }
    fn chain(rng: &mut ChaCha8Rng, processors: usize) -> String {
        let mut parts = vec![art(rng).to_owned()];
        for _ in 0..processors {
            parts.push(proc(rng).to_owned());
            parts.push(art(rng).to_owned());
        }
        parts.join(" -> ")
    }
    let total = rng.gen_range(1..=max_processors);
    if total >= 2 && rng.gen_bool(0.5) {
        let tail = rng.gen_range(1..total);
        let mut head = total - tail;
        let branches = rng.gen_range(2..=3);
        let mut parts = Vec::new();
        for b in 0..branches {
            let n = if b + 1 == branches { head } else { rng.gen_range(0..=head) };
            head -= n;
            parts.push(chain(rng, n));
        }
        let mut rest = Vec::new();
        for _ in 0..tail {
            rest.push(proc(rng).to_owned());
            rest.push(art(rng).to_owned());
        }
        format!("[{{{}}} -> {}]", parts.join(" / "), rest.join(" -> "))
    } else {
        format!("[{}]", chain(rng, total))
    }
}

const LITERAL_TEXTS: [&str; 8] = ["plain", "with \"quotes\"", "back\\slash", "line\nbreak", "tab\there", "ünïcödé ✓", "", "  spaced  "];

fn random_term(rng: &mut ChaCha8Rng, object: bool) -> Term {
    let pick = if object { rng.gen_range(0..6) } else { rng.gen_range(0..2) };
    match pick {
        0 => Term::Iri(Iri::new(format!("http://ex.org/n{}", rng.gen_range(0..30))).unwrap()),
        1 => Term::blank(format!("b{}", rng.gen_range(0..5))).unwrap(),
        2 => Term::Literal(Literal::plain(*LITERAL_TEXTS.choose(rng).unwrap())),
        3 => Term::Literal(Literal::integer(rng.gen_range(-1000..1000))),
        4 => Term::Literal(Literal::lang(*LITERAL_TEXTS.choose(rng).unwrap(), ["en", "de", "en-GB"].choose(rng).unwrap().to_string()).unwrap()),
        _ => Term::Literal(Literal::typed(
            format!("v{}", rng.gen_range(0..9)),
            Iri::new(format!("http://ex.org/dt{}", rng.gen_range(0..2))).unwrap(),
        )),
    }
}

/// Random graph with at most `max_triples` triples mixing IRIs, blank nodes,
/// and plain, language-tagged and typed literals.
pub fn random_graph(rng: &mut ChaCha8Rng, max_triples: usize) -> Graph {
    let mut g = Graph::new();
    for _ in 0..rng.gen_range(0..=max_triples) {
        let s = random_term(rng, false);
        let p = Iri::new(format!("http://ex.org/p{}", rng.gen_range(0..6))).unwrap();
        let o = random_term(rng, true);
        g.insert(Triple::new(s, p, o).unwrap());
    }
    g
}
