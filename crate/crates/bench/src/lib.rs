//! Synthetic inputs shared by the benchmarks.

use swemls_core::boxology::parse_pattern;
use swemls_core::pattern::build_template;
use swemls_core::WorkflowTemplate;

/// A chain `[sym -> ML -> data -> ML -> ... -> sym]` with `steps` processors.
pub fn chain_template(steps: usize) -> WorkflowTemplate {
    let mut notation = String::from("[sym");
    for i in 0..steps {
        notation.push_str(" -> ML -> ");
        notation.push_str(if i + 1 == steps { "sym" } else { "data" });
    }
    notation.push(']');
    build_template("Chain", &parse_pattern(&notation).expect("valid notation")).expect("compiles")
}

use std::path::{Path, PathBuf};

use swemls_core::graph::{parse, Format, Graph};
use swemls_core::ingest::{ingest_rows, load_config};
use swemls_core::{enrich, load_library, PatternLibrary};

/// File in the repository checkout.
pub fn repo_file(relative: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(relative)
}

fn read(relative: &str) -> String {
    std::fs::read_to_string(repo_file(relative)).expect("repository file")
}

/// The shipped pattern library.
pub fn library() -> PatternLibrary {
    load_library(&repo_file("patterns")).expect("library loads")
}

/// Shipped systems table ingested with its resource hierarchy, enriched.
pub fn mini_kg() -> Graph {
    let config = load_config(&read("config/mapping.tsv")).expect("config");
    let mut graph = ingest_rows(&read("fixtures/systems.tsv"), &config).expect("ingest").graph;
    graph.merge(&parse(&read("fixtures/resources.ttl"), Format::Turtle).expect("resources"));
    enrich(&graph, &library()).graph
}

/// Query text of a shipped fixture.
pub fn query_text(name: &str) -> String {
    read(&format!("fixtures/{name}"))
}
