//! Sampled path similarity and heap-based top-k retrieval.
//!
//! The similarity of two vertices is the fraction of sampled paths that contain
//! both. Scores are kept as integer co-occurrence counts and only divided by `R`
//! when they leave this module.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{PantherError, Result};
use crate::graph::VertexId;
use crate::sampler::PathIndex;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityScore {
    pub query: VertexId,
    pub target: VertexId,
    /// Number of sampled paths containing both vertices.
    pub co_occurrences: u32,
    pub sample_size: usize,
}

impl SimilarityScore {
    pub fn value(&self) -> f64 {
        self.co_occurrences as f64 / self.sample_size as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoredVertex {
    pub vertex: VertexId,
    pub score: f64,
}

/// Ranked neighbors of a query vertex: scores non-increasing, ties by ascending id.
#[derive(Clone, Debug, PartialEq)]
pub struct TopKResult {
    pub query: VertexId,
    pub entries: Vec<ScoredVertex>,
}

impl TopKResult {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.entries.iter().map(|e| e.vertex)
    }
}

/// Size of the intersection of two ascending, duplicate-free id lists.
pub fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn similarity(idx: &PathIndex, u: VertexId, v: VertexId) -> Result<SimilarityScore> {
    idx.check_vertex(u)?;
    idx.check_vertex(v)?;
    if u == v {
        return Err(PantherError::SelfQuery(u as usize));
    }
    let shared = intersection_size(idx.paths_through(u), idx.paths_through(v));
    Ok(SimilarityScore {
        query: u,
        target: v,
        co_occurrences: shared as u32,
        sample_size: idx.sample_size(),
    })
}

/// Reusable per-thread buffers for counting co-occurrences of one query vertex.
pub struct CoOccurrence {
    counts: Vec<u32>,
    last_path: Vec<u32>,
    touched: Vec<VertexId>,
}

impl CoOccurrence {
    pub fn new(vertex_count: usize) -> Self {
        CoOccurrence {
            counts: vec![0; vertex_count],
            last_path: vec![u32::MAX; vertex_count],
            touched: Vec::new(),
        }
    }

    /// Counts, for every vertex sharing a sampled path with `v`, how many of `v`'s paths it
    /// appears on. Each path contributes at most once per vertex; `v` itself is skipped.
    pub fn count(&mut self, idx: &PathIndex, v: VertexId) -> Vec<(VertexId, u32)> {
        for &p in idx.paths_through(v) {
            for &u in idx.path(p as usize) {
                if u == v || self.last_path[u as usize] == p {
                    continue;
                }
                self.last_path[u as usize] = p;
                if self.counts[u as usize] == 0 {
                    self.touched.push(u);
                }
                self.counts[u as usize] += 1;
            }
        }
        let mut out = Vec::with_capacity(self.touched.len());
        for &u in &self.touched {
            out.push((u, self.counts[u as usize]));
            self.counts[u as usize] = 0;
            self.last_path[u as usize] = u32::MAX;
        }
        self.touched.clear();
        out
    }
}

/// Keeps the `k` best `(vertex, count)` pairs, best = higher count, then lower id.
/// Output is sorted best first.
pub fn select_top_k<I>(candidates: I, k: usize) -> Vec<(VertexId, u32)>
where
    I: IntoIterator<Item = (VertexId, u32)>,
{
    if k == 0 {
        return Vec::new();
    }
    let mut heap: BinaryHeap<Reverse<(u32, Reverse<VertexId>)>> = BinaryHeap::with_capacity(k + 1);
    for (v, c) in candidates {
        let key = (c, Reverse(v));
        if heap.len() < k {
            heap.push(Reverse(key));
        } else if let Some(Reverse(worst)) = heap.peek() {
            if key > *worst {
                heap.pop();
                heap.push(Reverse(key));
            }
        }
    }
    let mut out: Vec<(VertexId, u32)> =
        heap.into_iter().map(|Reverse((c, Reverse(v)))| (v, c)).collect();
    out.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    out
}

fn to_result(idx: &PathIndex, query: VertexId, ranked: Vec<(VertexId, u32)>) -> TopKResult {
    let r = idx.sample_size() as f64;
    TopKResult {
        query,
        entries: ranked
            .into_iter()
            .map(|(vertex, c)| ScoredVertex { vertex, score: c as f64 / r })
            .collect(),
    }
}

/// The `k` vertices most often sharing a sampled path with `v`. The query itself is
/// excluded; fewer than `k` entries come back when fewer vertices co-occur with it.
pub fn top_k(idx: &PathIndex, v: VertexId, k: usize) -> Result<TopKResult> {
    idx.check_vertex(v)?;
    if k == 0 {
        return Err(PantherError::InvalidArgument("k must be at least 1".into()));
    }
    let mut scratch = CoOccurrence::new(idx.vertex_count());
    Ok(top_k_with(idx, v, k, &mut scratch))
}

pub fn top_k_with(idx: &PathIndex, v: VertexId, k: usize, scratch: &mut CoOccurrence) -> TopKResult {
    let counts = scratch.count(idx, v);
    to_result(idx, v, select_top_k(counts, k))
}

/// Top-k for every vertex, in vertex id order.
pub fn top_k_all(idx: &PathIndex, k: usize) -> Result<Vec<TopKResult>> {
    if k == 0 {
        return Err(PantherError::InvalidArgument("k must be at least 1".into()));
    }
    let n = idx.vertex_count();
    Ok((0..n as VertexId)
        .into_par_iter()
        .map_init(|| CoOccurrence::new(n), |scratch, v| top_k_with(idx, v, k, scratch))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::sampler::generate_paths;
    use proptest::prelude::*;

    fn sort_then_truncate(mut c: Vec<(VertexId, u32)>, k: usize) -> Vec<(VertexId, u32)> {
        c.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        c.truncate(k);
        c
    }

    #[test]
    fn every_path_shared_gives_one() {
        // single edge: every walk alternates between both endpoints
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let idx = generate_paths(&g, 500, 3, 1).unwrap();
        assert_eq!(similarity(&idx, 0, 1).unwrap().value(), 1.0);
    }

    #[test]
    fn different_components_give_zero() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let idx = generate_paths(&g, 2000, 3, 1).unwrap();
        assert_eq!(similarity(&idx, 0, 2).unwrap().value(), 0.0);
        assert_eq!(similarity(&idx, 1, 3).unwrap().co_occurrences, 0);
    }

    #[test]
    fn self_query_rejected() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let idx = generate_paths(&g, 10, 2, 1).unwrap();
        assert!(matches!(similarity(&idx, 1, 1), Err(PantherError::SelfQuery(1))));
        assert!(similarity(&idx, 0, 9).is_err());
        assert!(top_k(&idx, 0, 0).is_err());
    }

    #[test]
    fn fewer_candidates_than_k() {
        // star with three leaves: centre co-occurs with exactly three vertices
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let idx = generate_paths(&g, 5000, 2, 7).unwrap();
        let res = top_k(&idx, 0, 10).unwrap();
        assert_eq!(res.entries.len(), 3);
        assert!(res.vertices().all(|v| v != 0));
    }

    #[test]
    fn path_graph_middle_vertex() {
        // a-b-c with T=1: P(path has a and b) = P(has b and c) = 1/3 + 1/3 * 1/2 = 1/2
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let r = 100_000;
        let idx = generate_paths(&g, r, 1, 11).unwrap();
        let res = top_k(&idx, 1, 2).unwrap();
        let mut got: Vec<VertexId> = res.vertices().collect();
        got.sort();
        assert_eq!(got, vec![0, 2]);
        let se = (0.5f64 * 0.5 / r as f64).sqrt();
        for e in &res.entries {
            assert!((e.score - 0.5).abs() < 3.0 * se, "{e:?}");
        }
        assert!((res.entries[0].score - res.entries[1].score).abs() < 3.0 * 2f64.sqrt() * se);
    }

    #[test]
    fn ties_break_by_ascending_id() {
        let ranked = select_top_k(vec![(5, 3), (2, 3), (9, 4), (1, 1)], 3);
        assert_eq!(ranked, vec![(9, 4), (2, 3), (5, 3)]);
    }

    #[test]
    fn counts_match_pairwise_similarity() {
        let g = WeightedGraph::from_edges(
            6,
            &[(0, 1, 1.0), (1, 2, 2.0), (2, 0, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 3, 0.5)],
        )
        .unwrap();
        let idx = generate_paths(&g, 3000, 4, 3).unwrap();
        let mut scratch = CoOccurrence::new(6);
        for v in 0..6 {
            let counts = scratch.count(&idx, v);
            for (u, c) in counts {
                assert_eq!(similarity(&idx, v, u).unwrap().co_occurrences, c);
            }
        }
    }

    fn arb_graph() -> impl Strategy<Value = (usize, Vec<(u32, u32, f64)>)> {
        (2usize..20).prop_flat_map(|n| {
            let edge = (0..n as u32, 0..n as u32, 0.1f64..5.0);
            (Just(n), prop::collection::vec(edge, 1..60))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn heap_selection_equals_full_sort((n, edges) in arb_graph(), seed in any::<u64>(), k in 1usize..12) {
            let g = WeightedGraph::from_edges(n, &edges).unwrap();
            let idx = generate_paths(&g, 400, 3, seed).unwrap();
            let mut scratch = CoOccurrence::new(n);
            for v in 0..n as VertexId {
                let counts = scratch.count(&idx, v);
                prop_assert_eq!(select_top_k(counts.clone(), k), sort_then_truncate(counts, k));
            }
        }

        #[test]
        fn score_bounds_and_symmetry((n, edges) in arb_graph(), seed in any::<u64>()) {
            let g = WeightedGraph::from_edges(n, &edges).unwrap();
            let r = 300;
            let idx = generate_paths(&g, r, 3, seed).unwrap();
            for u in 0..n as VertexId {
                for v in (u + 1)..n as VertexId {
                    let a = similarity(&idx, u, v).unwrap();
                    let b = similarity(&idx, v, u).unwrap();
                    prop_assert_eq!(a.co_occurrences, b.co_occurrences);
                    prop_assert!((0.0..=1.0).contains(&a.value()));
                    let bound = idx.paths_through(u).len().min(idx.paths_through(v).len());
                    prop_assert!(a.co_occurrences as usize <= bound);
                    prop_assert!((a.value() * r as f64 - a.co_occurrences as f64).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn top_k_only_returns_co_occurring((n, edges) in arb_graph(), seed in any::<u64>()) {
            let g = WeightedGraph::from_edges(n, &edges).unwrap();
            let idx = generate_paths(&g, 200, 2, seed).unwrap();
            for res in top_k_all(&idx, 5).unwrap() {
                prop_assert!(res.entries.windows(2).all(|w| w[0].score > w[1].score
                    || (w[0].score == w[1].score && w[0].vertex < w[1].vertex)));
                for e in &res.entries {
                    prop_assert!(e.vertex != res.query);
                    prop_assert!(e.score > 0.0);
                }
            }
        }
    }
}
