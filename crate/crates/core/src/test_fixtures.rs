//! Shipped fixtures assembled for unit tests.

use std::path::Path;

use crate::graph::{parse, Format, Graph};

pub(crate) fn mini_kg() -> Graph {
    let config = crate::ingest::load_config(include_str!("../../../config/mapping.tsv")).unwrap();
    let outcome = crate::ingest::ingest_rows(include_str!("../../../fixtures/systems.tsv"), &config).unwrap();
    assert!(outcome.errors.is_empty());
    let mut g = outcome.graph;
    g.merge(&parse(include_str!("../../../fixtures/resources.ttl"), Format::Turtle).unwrap());
    g
}

pub(crate) fn enriched_mini_kg() -> Graph {
    let lib = crate::pattern::load_library(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../patterns")).unwrap();
    crate::conformance::enrich(&mini_kg(), &lib).graph
}
