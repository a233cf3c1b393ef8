//! Terms, triples and an indexed in-memory triple set.

mod store;
mod term;
mod turtle;

pub use store::{Graph, PrefixMap};
pub use term::{Iri, Literal, Term, Triple};
pub use turtle::{parse, serialize, Format};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid IRI {iri:?}: {reason}")]
    InvalidIri { iri: String, reason: &'static str },
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("literal {0} cannot be the subject of a triple")]
    LiteralSubject(String),
    #[error("predicate {0} is not an IRI")]
    NonIriPredicate(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}:{column}: unknown prefix `{prefix}`")]
    UnknownPrefix { line: usize, column: usize, prefix: String },
    #[error("unknown format `{0}` (expected turtle or ntriples)")]
    UnknownFormat(String),
}
