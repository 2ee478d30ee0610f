//! Run parameters shared by the library pipeline and the CLI.

use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::pp::{VectorIndex, DEFAULT_DIMENSION};
use crate::sampler::{
    generate_paths, required_sample_size, PathIndex, SamplingBudget, DEFAULT_C, DEFAULT_DELTA,
    DEFAULT_PATH_LENGTH,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PantherParams {
    /// `None` derives epsilon from the edge count of each graph as `sqrt(1/|E|)`.
    pub epsilon: Option<f64>,
    pub delta: f64,
    pub c: f64,
    pub path_length: usize,
    pub dimension: usize,
    pub seed: u64,
}

impl Default for PantherParams {
    fn default() -> Self {
        PantherParams {
            epsilon: None,
            delta: DEFAULT_DELTA,
            c: DEFAULT_C,
            path_length: DEFAULT_PATH_LENGTH,
            dimension: DEFAULT_DIMENSION,
            seed: 0,
        }
    }
}

impl PantherParams {
    pub fn budget_for(&self, g: &WeightedGraph) -> Result<SamplingBudget> {
        let epsilon = match self.epsilon {
            Some(e) => e,
            None => SamplingBudget::default_for_edges(g.edge_count())?.epsilon,
        };
        SamplingBudget::new(epsilon, self.delta, self.c, self.path_length)
    }

    pub fn sample_size_for(&self, g: &WeightedGraph) -> Result<usize> {
        required_sample_size(&self.budget_for(g)?)
    }

    pub fn sample(&self, g: &WeightedGraph) -> Result<PathIndex> {
        generate_paths(g, self.sample_size_for(g)?, self.path_length, self.seed)
    }

    pub fn vector_index(&self, g: &WeightedGraph) -> Result<VectorIndex> {
        VectorIndex::from_paths(&self.sample(g)?, self.dimension)
    }
}
