//! Fixtures, generators and reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

pub mod generators;
pub mod mapping_oracle;
pub mod query_oracle;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use swemls_core::graph::{parse, Format, Graph};
use swemls_core::ingest::{ingest_rows, load_config};
use swemls_core::{enrich, load_library, PatternLibrary};

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn read(relative: &str) -> String {
    std::fs::read_to_string(repo_root().join(relative)).unwrap_or_else(|e| panic!("{relative}: {e}"))
}

pub fn library() -> PatternLibrary {
    load_library(&repo_root().join("patterns")).expect("shipped pattern library loads")
}

/// Ingested systems table merged with the resource hierarchy.
pub fn mini_kg() -> Graph {
    let config = load_config(&read("config/mapping.tsv")).expect("shipped config loads");
    let outcome = ingest_rows(&read("fixtures/systems.tsv"), &config).expect("fixture ingests");
    assert!(outcome.errors.is_empty(), "{:?}", outcome.errors);
    let mut graph = outcome.graph;
    graph.merge(&parse(&read("fixtures/resources.ttl"), Format::Turtle).expect("resources parse"));
    graph
}

pub fn enriched_mini_kg() -> Graph {
    enrich(&mini_kg(), &library()).graph
}

/// Runs `f`, returning its result and wall-clock time.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}
