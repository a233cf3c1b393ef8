//! Toolkit for knowledge graphs describing systems that combine Semantic Web
//! resources with machine learning components.
//!
//! The pipeline: boxology notation is parsed ([`boxology`]) and compiled into
//! workflow templates ([`pattern`]); tabular system descriptions are ingested
//! into a graph ([`ingest`]), enriched and validated against their templates
//! ([`conformance`]); the result is queried ([`query`]) and embedded
//! ([`embed`]).

pub mod boxology;
pub mod conformance;
pub mod embed;
pub mod graph;
pub mod ingest;
pub mod pattern;
pub mod query;
pub mod vocab;

#[cfg(test)]
pub(crate) mod test_fixtures;

pub use boxology::{parse_pattern, render_notation, ArtifactKind, Flow, PatternAst, ProcessorKind, Stage};
pub use conformance::{enrich, find_mapping, validate, ConstraintSet, TemplateMapping, ValidationReport};
pub use graph::{Format, Graph, Iri, Literal, Term, Triple};
pub use pattern::{compile_template, load_library, PatternLibrary, WorkflowTemplate};
