//! Random-walk embeddings: seeded walks over the graph, skip-gram training
//! with negative sampling, cosine neighbors and a 2D PCA projection.

mod pca;
mod space;
mod train;
mod walks;

use thiserror::Error;

pub use pca::{project_2d, project_points, symmetric_eigen, CoordinateTable, PlanarProjection};
pub use space::{neighbors, neighbors_in, EmbeddingSpace};
pub use train::{train, train_with_losses, TrainConfig};
pub use walks::{entity_seed, generate_walks, token, Walk, WalkConfig, WalkCorpus};

#[derive(Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("the walk corpus is empty")]
    EmptyCorpus,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("`{0}` is not in the embedding space")]
    UnknownEntity(String),
    #[error("projection needs at least 2 entities, got {0}")]
    TooFewEntities(usize),
    #[error("embedding file line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[cfg(test)]
pub(crate) fn two_clique_graph() -> crate::graph::Graph {
    crate::graph::parse(include_str!("../../../../fixtures/two-cliques.ttl"), crate::graph::Format::Turtle).unwrap()
}
