//! Structural feature vectors and Euclidean nearest-neighbor search over them.
//!
//! A vertex is described by its `D` largest sampled path similarities, sorted
//! descending and zero-padded. Two vertices are similar when these vectors are
//! close, whatever their neighbors are, which makes the score usable across
//! disconnected networks.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rayon::prelude::*;

use crate::error::{PantherError, Result};
use crate::graph::VertexId;
use crate::kdtree::{KdTree, Neighbor};
use crate::sampler::PathIndex;
use crate::similarity::{select_top_k, CoOccurrence, ScoredVertex, TopKResult};

pub const DEFAULT_DIMENSION: usize = 50;

const VECTORS_MAGIC: &[u8; 8] = b"PNTHVECS";
const VECTORS_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub vertex: VertexId,
    pub values: Vec<f64>,
}

/// Top-`dimension` similarity values for every vertex of the index, in vertex id order.
pub fn build_vectors(idx: &PathIndex, dimension: usize) -> Result<Vec<FeatureVector>> {
    if dimension == 0 {
        return Err(PantherError::InvalidArgument("vector dimension must be at least 1".into()));
    }
    let n = idx.vertex_count();
    let r = idx.sample_size() as f64;
    Ok((0..n as VertexId)
        .into_par_iter()
        .map_init(
            || CoOccurrence::new(n),
            |scratch, v| {
                let counts = scratch.count(idx, v);
                let mut values: Vec<f64> = select_top_k(counts, dimension)
                    .into_iter()
                    .map(|(_, c)| c as f64 / r)
                    .collect();
                values.resize(dimension, 0.0);
                FeatureVector { vertex: v, values }
            },
        )
        .collect())
}

fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(PantherError::DimensionMismatch { expected, actual })
    }
}

/// Maps a squared distance to `1 / distance`; coincident points score `f64::INFINITY`,
/// which ranks above every finite score.
pub fn score_from_squared_distance(d2: f64) -> f64 {
    if d2 == 0.0 {
        f64::INFINITY
    } else {
        1.0 / d2.sqrt()
    }
}

/// Reciprocal Euclidean distance between two vectors.
pub fn similarity_pp(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    check_dims(a.values.len(), b.values.len())?;
    Ok(score_from_squared_distance(crate::kdtree::squared_distance(&a.values, &b.values)))
}

/// Feature vectors of one network together with a kd-tree over them.
#[derive(Clone, Debug)]
pub struct VectorIndex {
    dimension: usize,
    vectors: Vec<FeatureVector>,
    tree: KdTree,
}

impl VectorIndex {
    pub fn new(dimension: usize, vectors: Vec<FeatureVector>) -> Result<Self> {
        if dimension == 0 {
            return Err(PantherError::InvalidArgument("vector dimension must be at least 1".into()));
        }
        let mut points = Vec::with_capacity(vectors.len() * dimension);
        let mut ids = Vec::with_capacity(vectors.len());
        for v in &vectors {
            check_dims(dimension, v.values.len())?;
            points.extend_from_slice(&v.values);
            ids.push(v.vertex);
        }
        Ok(VectorIndex { dimension, tree: KdTree::build(dimension, points, ids), vectors })
    }

    /// Samples-to-index in one step: vectors from `idx`, then the kd-tree.
    pub fn from_paths(idx: &PathIndex, dimension: usize) -> Result<Self> {
        Self::new(dimension, build_vectors(idx, dimension)?)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[FeatureVector] {
        &self.vectors
    }

    /// Vector of vertex `v`, assuming vectors were stored in vertex id order.
    pub fn vector(&self, v: VertexId) -> Result<&FeatureVector> {
        match self.vectors.get(v as usize) {
            Some(fv) if fv.vertex == v => Ok(fv),
            _ => self.vectors.iter().find(|fv| fv.vertex == v).ok_or(
                PantherError::VertexOutOfRange { id: v as usize, vertex_count: self.vectors.len() },
            ),
        }
    }

    pub fn nearest(
        &self,
        point: &[f64],
        k: usize,
        exclude: Option<VertexId>,
    ) -> Result<Vec<Neighbor>> {
        check_dims(self.dimension, point.len())?;
        Ok(self.tree.nearest(point, k, exclude))
    }

    pub fn write_to<W: Write>(&self, mut out: W, graph_fingerprint: u64) -> Result<()> {
        out.write_all(VECTORS_MAGIC)?;
        out.write_u32::<LittleEndian>(VECTORS_VERSION)?;
        out.write_u64::<LittleEndian>(self.dimension as u64)?;
        out.write_u64::<LittleEndian>(self.vectors.len() as u64)?;
        out.write_u64::<LittleEndian>(graph_fingerprint)?;
        for fv in &self.vectors {
            out.write_u32::<LittleEndian>(fv.vertex)?;
            for &x in &fv.values {
                out.write_f64::<LittleEndian>(x)?;
            }
        }
        Ok(())
    }

    /// Reads a vector sidecar, returning the index and the fingerprint it was saved with.
    pub fn read_from<R: Read>(mut input: R) -> Result<(Self, u64)> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != VECTORS_MAGIC {
            return Err(PantherError::Format("not a feature vector file".into()));
        }
        let version = input.read_u32::<LittleEndian>()?;
        if version != VECTORS_VERSION {
            return Err(PantherError::Format(format!("unsupported vector file version {version}")));
        }
        let dimension = input.read_u64::<LittleEndian>()? as usize;
        let n = input.read_u64::<LittleEndian>()? as usize;
        let fingerprint = input.read_u64::<LittleEndian>()?;
        let mut vectors = Vec::with_capacity(n);
        for _ in 0..n {
            let vertex = input.read_u32::<LittleEndian>()?;
            let mut values = vec![0.0; dimension];
            input.read_f64_into::<LittleEndian>(&mut values)?;
            vectors.push(FeatureVector { vertex, values });
        }
        Ok((Self::new(dimension, vectors)?, fingerprint))
    }
}

fn neighbors_to_result(query: VertexId, found: Vec<Neighbor>) -> TopKResult {
    TopKResult {
        query,
        entries: found
            .into_iter()
            .map(|n| ScoredVertex {
                vertex: n.id,
                score: score_from_squared_distance(n.squared_distance),
            })
            .collect(),
    }
}

/// Nearest vectors to `query` inside `index`, skipping `query`'s own vertex.
pub fn top_k_pp(index: &VectorIndex, query: &FeatureVector, k: usize) -> Result<TopKResult> {
    if k == 0 {
        return Err(PantherError::InvalidArgument("k must be at least 1".into()));
    }
    let found = index.nearest(&query.values, k, Some(query.vertex))?;
    Ok(neighbors_to_result(query.vertex, found))
}

/// Nearest vectors of `b` to the vector of `query` in `a`. Nothing is excluded, since ids
/// in `b` are unrelated to ids in `a`.
pub fn cross_network_top_k(
    a: &VectorIndex,
    b: &VectorIndex,
    query: VertexId,
    k: usize,
) -> Result<TopKResult> {
    check_dims(a.dimension(), b.dimension())?;
    if k == 0 {
        return Err(PantherError::InvalidArgument("k must be at least 1".into()));
    }
    let q = a.vector(query)?;
    let found = b.nearest(&q.values, k, None)?;
    Ok(neighbors_to_result(query, found))
}
