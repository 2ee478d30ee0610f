//! Brute-force reference computations for small graphs.
//!
//! Nothing here shares code with the sampling path: transition probabilities are
//! recomputed from raw edge weights and every walk is enumerated explicitly.

use std::collections::BTreeSet;

use crate::error::{PantherError, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::kdtree::squared_distance;
use crate::pp::{score_from_squared_distance, FeatureVector};
use crate::similarity::{ScoredVertex, TopKResult};

/// Upper bound on `|V| * avg_degree^T` that the enumerator accepts.
pub const ENUMERATION_LIMIT: f64 = 1e7;

/// Exact probability, for every vertex pair, that a random walk of `T` steps from a
/// uniform start visits both. The diagonal holds the probability of visiting the vertex.
#[derive(Clone, Debug)]
pub struct ExactPathTable {
    path_length: usize,
    vertex_count: usize,
    pair: Vec<f64>,
    total_mass: f64,
    path_count: usize,
}

impl ExactPathTable {
    pub fn build(g: &WeightedGraph, path_length: usize) -> Result<Self> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(PantherError::InvalidArgument("empty graph".into()));
        }
        let nnz: usize = (0..n as VertexId).map(|v| g.degree(v)).sum();
        let avg_degree = (nnz as f64 / n as f64).max(1.0);
        let estimate = n as f64 * avg_degree.powi(path_length as i32);
        if estimate > ENUMERATION_LIMIT {
            return Err(PantherError::OracleTooLarge { estimate, limit: ENUMERATION_LIMIT });
        }

        let transitions: Vec<Vec<(VertexId, f64)>> = (0..n as VertexId)
            .map(|v| {
                let (nbrs, ws) = g.neighbors_with_weights(v);
                let total: f64 = ws.iter().sum();
                nbrs.iter().zip(ws).map(|(&j, &w)| (j, w / total)).collect()
            })
            .collect();

        let mut table = ExactPathTable {
            path_length,
            vertex_count: n,
            pair: vec![0.0; n * n],
            total_mass: 0.0,
            path_count: 0,
        };
        let mut walk = Vec::with_capacity(path_length + 1);
        for start in 0..n as VertexId {
            walk.push(start);
            table.extend(&transitions, &mut walk, 1.0 / n as f64);
            walk.pop();
        }
        Ok(table)
    }

    fn extend(&mut self, transitions: &[Vec<(VertexId, f64)>], walk: &mut Vec<VertexId>, prob: f64) {
        let last = *walk.last().unwrap();
        let out = &transitions[last as usize];
        if walk.len() == self.path_length + 1 || out.is_empty() {
            self.record(walk, prob);
            return;
        }
        for &(next, t) in out {
            walk.push(next);
            self.extend(transitions, walk, prob * t);
            walk.pop();
        }
    }

    fn record(&mut self, walk: &[VertexId], prob: f64) {
        let unique: BTreeSet<VertexId> = walk.iter().copied().collect();
        for &u in &unique {
            for &v in &unique {
                self.pair[u as usize * self.vertex_count + v as usize] += prob;
            }
        }
        self.total_mass += prob;
        self.path_count += 1;
    }

    pub fn path_length(&self) -> usize {
        self.path_length
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Sum of the probabilities of all enumerated walks; 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn path_count(&self) -> usize {
        self.path_count
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> f64 {
        self.pair[u as usize * self.vertex_count + v as usize]
    }

    /// Largest `dimension` exact similarities of `v` to other vertices, zero-padded.
    pub fn feature_vector(&self, v: VertexId, dimension: usize) -> FeatureVector {
        let mut values: Vec<f64> = (0..self.vertex_count as VertexId)
            .filter(|&u| u != v)
            .map(|u| self.get(v, u))
            .filter(|&s| s > 0.0)
            .collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values.resize(dimension, 0.0);
        FeatureVector { vertex: v, values }
    }
}

pub fn exact_path_similarity(
    g: &WeightedGraph,
    path_length: usize,
    u: VertexId,
    v: VertexId,
) -> Result<f64> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(ExactPathTable::build(g, path_length)?.get(u, v))
}

/// `|N(u) ∩ N(v)| / |N(u) ∪ N(v)|`, with 0 when both neighborhoods are empty.
pub fn jaccard(g: &WeightedGraph, u: VertexId, v: VertexId) -> Result<f64> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let (a, b) = (g.neighbors(u), g.neighbors(v));
    let common = crate::similarity::intersection_size(a, b);
    let union = a.len() + b.len() - common;
    Ok(if union == 0 { 0.0 } else { common as f64 / union as f64 })
}

/// Exhaustive Euclidean k-NN: nearest first, ties by ascending vertex id.
pub fn brute_knn(
    vectors: &[FeatureVector],
    query: &FeatureVector,
    k: usize,
    exclude: Option<VertexId>,
) -> TopKResult {
    let mut scored: Vec<(f64, VertexId)> = vectors
        .iter()
        .filter(|fv| Some(fv.vertex) != exclude)
        .map(|fv| (squared_distance(&query.values, &fv.values), fv.vertex))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(k);
    TopKResult {
        query: query.vertex,
        entries: scored
            .into_iter()
            .map(|(d2, vertex)| ScoredVertex { vertex, score: score_from_squared_distance(d2) })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> WeightedGraph {
        WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_pairs() {
        let t = ExactPathTable::build(&k3(), 2).unwrap();
        assert_eq!(t.path_count(), 12);
        assert!((t.total_mass() - 1.0).abs() < 1e-12);
        for u in 0..3 {
            for v in 0..3 {
                let want = if u == v { 5.0 / 6.0 } else { 2.0 / 3.0 };
                assert!((t.get(u, v) - want).abs() < 1e-12, "{u} {v} {}", t.get(u, v));
            }
        }
    }

    #[test]
    fn disconnected_pair_is_zero() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (2, 3, 2.0)]).unwrap();
        assert_eq!(exact_path_similarity(&g, 3, 0, 3).unwrap(), 0.0);
        assert!(exact_path_similarity(&g, 3, 0, 4).is_err());
    }

    #[test]
    fn isolated_vertex_mass_is_truncated_path() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let t = ExactPathTable::build(&g, 4).unwrap();
        assert!((t.total_mass() - 1.0).abs() < 1e-12);
        assert!((t.get(2, 2) - 1.0 / 3.0).abs() < 1e-12);
        assert!((t.get(0, 1) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn refuses_large_graphs() {
        let n = 200u32;
        let edges: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v, 1.0))).collect();
        let g = WeightedGraph::from_edges(n as usize, &edges).unwrap();
        assert!(matches!(ExactPathTable::build(&g, 5), Err(PantherError::OracleTooLarge { .. })));
    }

    #[test]
    fn jaccard_cases() {
        // a-c, b-c, b-d: N(a)={c}, N(b)={c,d}
        let g = WeightedGraph::from_edges(5, &[(0, 2, 1.0), (1, 2, 1.0), (1, 3, 1.0)]).unwrap();
        assert_eq!(jaccard(&g, 0, 1).unwrap(), 0.5);
        // N(u)={b,c}, N(v)={a,c} with u=3, v=4 over vertices a=0,b=1,c=2
        let g = WeightedGraph::from_edges(5, &[(3, 1, 1.0), (3, 2, 1.0), (4, 0, 1.0), (4, 2, 1.0)])
            .unwrap();
        assert!((jaccard(&g, 3, 4).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // identical neighborhoods
        let g = WeightedGraph::from_edges(4, &[(0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0)])
            .unwrap();
        assert_eq!(jaccard(&g, 0, 1).unwrap(), 1.0);
        let g = WeightedGraph::from_edges(2, &[]).unwrap();
        assert_eq!(jaccard(&g, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn brute_knn_ties_and_single() {
        let one = vec![FeatureVector { vertex: 9, values: vec![0.2, 0.1] }];
        let q = FeatureVector { vertex: 0, values: vec![0.0, 0.0] };
        assert_eq!(brute_knn(&one, &q, 3, None).vertices().collect::<Vec<_>>(), vec![9]);
        let dup = vec![
            FeatureVector { vertex: 4, values: vec![0.5, 0.5] },
            FeatureVector { vertex: 2, values: vec![0.5, 0.5] },
        ];
        assert_eq!(brute_knn(&dup, &q, 2, None).vertices().collect::<Vec<_>>(), vec![2, 4]);
    }
}
