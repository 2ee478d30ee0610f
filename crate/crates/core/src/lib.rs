//! Top-k vertex similarity for undirected weighted networks by random path sampling.
//!
//! Two vertices are similar when they often appear on the same short random walk.
//! [`sampler`] draws the walks and inverts them into per-vertex posting lists,
//! [`similarity`] answers pairwise and top-k queries from those lists, and [`pp`]
//! turns each vertex's strongest similarities into a feature vector searchable with
//! a kd-tree, which also works across networks that share no vertices.

pub mod error;
pub mod eval;
pub mod graph;
pub mod kdtree;
pub mod params;
pub mod oracle;
pub mod pp;
pub mod sampler;
pub mod similarity;
pub mod synth;

pub mod cli;

pub use error::{PantherError, Result};
pub use graph::{GraphBuilder, VertexId, WeightedGraph};
pub use pp::{
    build_vectors, cross_network_top_k, similarity_pp, top_k_pp, FeatureVector, VectorIndex,
};
pub use sampler::{generate_paths, required_sample_size, PathIndex, SamplingBudget};
pub use similarity::{similarity, top_k, ScoredVertex, SimilarityScore, TopKResult};
