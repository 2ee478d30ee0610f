//! Accuracy protocols: agreement with common-neighbor counts, and cross-network
//! identity resolution.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{PantherError, Result};
use crate::graph::{VertexId, WeightedGraph};
use crate::oracle::jaccard;
use crate::params::PantherParams;
use crate::pp::{cross_network_top_k, top_k_pp, VectorIndex};
use crate::sampler::PathIndex;
use crate::similarity::{intersection_size, ScoredVertex, TopKResult};

/// Seed set size used on graphs above this many vertices.
pub const MAX_DEFAULT_SEEDS: usize = 1000;
pub const DEFAULT_TRIALS: usize = 100;

/// Anything that can rank the vertices most similar to a query.
pub trait TopKProvider: Sync {
    fn name(&self) -> &str;
    fn top_k(&self, v: VertexId, k: usize) -> Result<TopKResult>;
}

pub struct Panther<'a>(pub &'a PathIndex);

impl TopKProvider for Panther<'_> {
    fn name(&self) -> &str {
        "panther"
    }

    fn top_k(&self, v: VertexId, k: usize) -> Result<TopKResult> {
        crate::similarity::top_k(self.0, v, k)
    }
}

pub struct PantherPp<'a>(pub &'a VectorIndex);

impl TopKProvider for PantherPp<'_> {
    fn name(&self) -> &str {
        "panther++"
    }

    fn top_k(&self, v: VertexId, k: usize) -> Result<TopKResult> {
        top_k_pp(self.0, self.0.vector(v)?, k)
    }
}

/// Ranks two-hop neighbors by Jaccard similarity of their neighborhoods.
pub struct Jaccard<'a>(pub &'a WeightedGraph);

impl TopKProvider for Jaccard<'_> {
    fn name(&self) -> &str {
        "jaccard"
    }

    fn top_k(&self, v: VertexId, k: usize) -> Result<TopKResult> {
        let g = self.0;
        g.check_vertex(v)?;
        let mut candidates: Vec<VertexId> = g
            .neighbors(v)
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().copied())
            .filter(|&u| u != v)
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let mut scored = Vec::with_capacity(candidates.len());
        for u in candidates {
            scored.push((u, jaccard(g, v, u)?));
        }
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.truncate(k);
        Ok(TopKResult {
            query: v,
            entries: scored.into_iter().map(|(vertex, score)| ScoredVertex { vertex, score }).collect(),
        })
    }
}

/// `k` distinct non-query vertices drawn uniformly, seeded per query.
pub struct RandomGuess {
    pub vertex_count: usize,
    pub seed: u64,
}

impl TopKProvider for RandomGuess {
    fn name(&self) -> &str {
        "random"
    }

    fn top_k(&self, v: VertexId, k: usize) -> Result<TopKResult> {
        if v as usize >= self.vertex_count {
            return Err(PantherError::VertexOutOfRange {
                id: v as usize,
                vertex_count: self.vertex_count,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (v as u64).rotate_left(32));
        Ok(TopKResult {
            query: v,
            entries: random_others(&mut rng, self.vertex_count, v, k)
                .into_iter()
                .map(|vertex| ScoredVertex { vertex, score: 0.0 })
                .collect(),
        })
    }
}

fn random_others<R: Rng>(rng: &mut R, n: usize, exclude: VertexId, k: usize) -> Vec<VertexId> {
    let k = k.min(n - 1);
    sample(rng, n - 1, k)
        .into_iter()
        .map(|i| if i as VertexId >= exclude { i as VertexId + 1 } else { i as VertexId })
        .collect()
}

pub fn common_neighbors(g: &WeightedGraph, u: VertexId, v: VertexId) -> usize {
    intersection_size(g.neighbors(u), g.neighbors(v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalScore {
    pub algorithm: String,
    pub k: usize,
    pub seeds: usize,
    /// Total common-neighbor count over every (seed, returned vertex) pair.
    pub f_alg: f64,
    /// Mean of the same total over the random-selection trials.
    pub f_random: f64,
    /// `(f_alg - f_random) / (|S| * k)`.
    pub score: f64,
    /// Standard deviation of one random trial, in score units.
    pub random_std_dev: f64,
    /// Standard error of `f_random`, in score units.
    pub random_std_error: f64,
}

/// Every vertex on small graphs, a seeded sample of [`MAX_DEFAULT_SEEDS`] otherwise.
pub fn default_seed_set(vertex_count: usize, seed: u64) -> Vec<VertexId> {
    if vertex_count <= MAX_DEFAULT_SEEDS {
        return (0..vertex_count as VertexId).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<VertexId> =
        sample(&mut rng, vertex_count, MAX_DEFAULT_SEEDS).into_iter().map(|i| i as VertexId).collect();
    s.sort_unstable();
    s
}

pub fn common_neighbor_score(
    g: &WeightedGraph,
    algorithm: &dyn TopKProvider,
    seeds: &[VertexId],
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<EvalScore> {
    let n = g.vertex_count();
    if seeds.is_empty() {
        return Err(PantherError::InvalidArgument("seed set is empty".into()));
    }
    if k == 0 || k >= n {
        return Err(PantherError::InvalidArgument(format!(
            "k must lie in [1, |V|), got k={k} with |V|={n}"
        )));
    }
    if trials == 0 {
        return Err(PantherError::InvalidArgument("need at least one random trial".into()));
    }
    for &u in seeds {
        g.check_vertex(u)?;
    }

    let f_alg: usize = seeds
        .par_iter()
        .map(|&u| -> Result<usize> {
            let top = algorithm.top_k(u, k)?;
            Ok(top.vertices().map(|v| common_neighbors(g, u, v)).sum())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();

    let per_trial: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            seeds
                .iter()
                .map(|&u| {
                    random_others(&mut rng, n, u, k)
                        .into_iter()
                        .map(|v| common_neighbors(g, u, v))
                        .sum::<usize>()
                })
                .sum::<usize>() as f64
        })
        .collect();
    let mean = per_trial.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        per_trial.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    let norm = (seeds.len() * k) as f64;
    let sd = var.sqrt() / norm;
    Ok(EvalScore {
        algorithm: algorithm.name().to_owned(),
        k,
        seeds: seeds.len(),
        f_alg: f_alg as f64,
        f_random: mean,
        score: (f_alg as f64 - mean) / norm,
        random_std_dev: sd,
        random_std_error: sd / (trials as f64).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionReport {
    pub ks: Vec<usize>,
    /// Fraction of queries whose counterpart is among the top `ks[i]`.
    pub hit_rates: Vec<f64>,
    pub queries: usize,
}

impl ResolutionReport {
    pub fn hit_rate(&self, k: usize) -> Option<f64> {
        self.ks.iter().position(|&x| x == k).map(|i| self.hit_rates[i])
    }
}

fn check_sweep(mapping: &[(VertexId, VertexId)], ks: &[usize]) -> Result<usize> {
    if mapping.is_empty() {
        return Err(PantherError::InvalidArgument("mapping is empty".into()));
    }
    if ks.is_empty() || ks.contains(&0) {
        return Err(PantherError::InvalidArgument("k sweep must be non-empty and positive".into()));
    }
    Ok(*ks.iter().max().unwrap())
}

/// Rank position (0-based) of each query's counterpart, `None` when it is not in the
/// top `k_max`. `rank_of` returns the ranked candidates for a query.
fn report_from<F>(mapping: &[(VertexId, VertexId)], ks: &[usize], rank_of: F) -> Result<ResolutionReport>
where
    F: Fn(VertexId) -> Result<Vec<VertexId>> + Sync,
{
    let positions: Vec<Option<usize>> = mapping
        .par_iter()
        .map(|&(a, b)| Ok(rank_of(a)?.iter().position(|&v| v == b)))
        .collect::<Result<_>>()?;
    let q = mapping.len() as f64;
    let hit_rates = ks
        .iter()
        .map(|&k| positions.iter().filter(|p| matches!(p, Some(i) if *i < k)).count() as f64 / q)
        .collect();
    Ok(ResolutionReport { ks: ks.to_vec(), hit_rates, queries: mapping.len() })
}

/// Hit rates of Panther++ cross-network search over prebuilt indexes.
pub fn resolve_with_indexes(
    a: &VectorIndex,
    b: &VectorIndex,
    mapping: &[(VertexId, VertexId)],
    ks: &[usize],
) -> Result<ResolutionReport> {
    let k_max = check_sweep(mapping, ks)?;
    report_from(mapping, ks, |u| Ok(cross_network_top_k(a, b, u, k_max)?.vertices().collect()))
}

/// Samples each network with its own budget (epsilon from its own edge count unless
/// fixed in `params`), builds both vector indexes and measures hit@k for every `k`.
pub fn identity_resolution(
    ga: &WeightedGraph,
    gb: &WeightedGraph,
    mapping: &[(VertexId, VertexId)],
    ks: &[usize],
    params: &PantherParams,
) -> Result<ResolutionReport> {
    check_sweep(mapping, ks)?;
    let a = params.vector_index(ga)?;
    let b = params.vector_index(gb)?;
    resolve_with_indexes(&a, &b, mapping, ks)
}

/// Hit rates of uniform guessing: `k` distinct vertices of `b` per query.
pub fn random_guess_resolution(
    b_vertex_count: usize,
    mapping: &[(VertexId, VertexId)],
    ks: &[usize],
    seed: u64,
) -> Result<ResolutionReport> {
    let k_max = check_sweep(mapping, ks)?.min(b_vertex_count);
    report_from(mapping, ks, |u| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u as u64).rotate_left(32));
        Ok(sample(&mut rng, b_vertex_count, k_max).into_iter().map(|i| i as VertexId).collect())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::generate_paths;
    use crate::synth::{preferential_attachment, synth_graph, SynthKind};

    #[test]
    fn random_provider_scores_near_zero() {
        let g = preferential_attachment(200, 3, 1).unwrap();
        let seeds = default_seed_set(200, 0);
        let rnd = RandomGuess { vertex_count: 200, seed: 99 };
        let s = common_neighbor_score(&g, &rnd, &seeds, 10, 100, 5).unwrap();
        let spread = (s.random_std_dev.powi(2) + s.random_std_error.powi(2)).sqrt();
        assert!(s.score.abs() < 2.0 * spread, "{s:?}");
    }

    #[test]
    fn no_common_neighbors_scores_zero() {
        // a perfect matching has no common neighbors anywhere
        let g = WeightedGraph::from_edges(10, &[(0, 1, 1.0), (2, 3, 1.0), (4, 5, 1.0)]).unwrap();
        let idx = generate_paths(&g, 500, 3, 1).unwrap();
        let s = common_neighbor_score(&g, &Panther(&idx), &[0, 2, 4, 9], 3, 20, 1).unwrap();
        assert_eq!((s.f_alg, s.f_random, s.score), (0.0, 0.0, 0.0));
    }

    #[test]
    fn invalid_protocol_arguments() {
        let g = preferential_attachment(20, 2, 1).unwrap();
        let rnd = RandomGuess { vertex_count: 20, seed: 0 };
        assert!(common_neighbor_score(&g, &rnd, &[], 3, 10, 0).is_err());
        assert!(common_neighbor_score(&g, &rnd, &[0], 20, 10, 0).is_err());
        assert!(common_neighbor_score(&g, &rnd, &[0], 3, 0, 0).is_err());
        let params = PantherParams::default();
        assert!(identity_resolution(&g, &g, &[], &[1], &params).is_err());
    }

    #[test]
    fn jaccard_provider_beats_random() {
        let g = preferential_attachment(200, 3, 2).unwrap();
        let seeds = default_seed_set(200, 0);
        let s = common_neighbor_score(&g, &Jaccard(&g), &seeds, 5, 50, 3).unwrap();
        assert!(s.score > 5.0 * s.random_std_error, "{s:?}");
    }

    #[test]
    fn score_invariant_under_relabelling() {
        let s = synth_graph(SynthKind::TwoCopiesPerturbed { n: 120, m: 3, rho: 0.0 }, 8).unwrap();
        let (copy, mapping) = s.copy.unwrap();
        let seeds_a: Vec<VertexId> = mapping.iter().map(|p| p.0).collect();
        let seeds_b: Vec<VertexId> = mapping.iter().map(|p| p.1).collect();
        // k = |V|-1 returns every two-hop candidate, so f_alg cannot depend on tie order
        let a = common_neighbor_score(&s.graph, &Jaccard(&s.graph), &seeds_a, 119, 50, 1).unwrap();
        let b = common_neighbor_score(&copy, &Jaccard(&copy), &seeds_b, 119, 50, 1).unwrap();
        assert_eq!(a.f_alg, b.f_alg);
        // every vertex is picked when k = |V|-1, so the random baseline is exact too
        assert_eq!(a.f_random, b.f_random);
        assert_eq!(a.score, b.score);

        let a = common_neighbor_score(&s.graph, &Jaccard(&s.graph), &seeds_a, 5, 200, 1).unwrap();
        let b = common_neighbor_score(&copy, &Jaccard(&copy), &seeds_b, 5, 200, 2).unwrap();
        let tol = 4.0 * (a.random_std_error + b.random_std_error);
        assert!((a.f_random - b.f_random).abs() / (a.seeds * a.k) as f64 <= tol, "{a:?} {b:?}");
    }

    #[test]
    fn exhaustive_k_hits_everything() {
        let s = synth_graph(SynthKind::TwoCopiesPerturbed { n: 40, m: 2, rho: 0.1 }, 3).unwrap();
        let (copy, mapping) = s.copy.unwrap();
        let params = PantherParams { epsilon: Some(0.1), dimension: 10, ..Default::default() };
        let report = identity_resolution(&s.graph, &copy, &mapping, &[1, 5, 40], &params).unwrap();
        assert_eq!(report.hit_rate(40), Some(1.0));
        assert!(report.hit_rates.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn random_guess_matches_k_over_n() {
        let n = 200;
        let mapping: Vec<(VertexId, VertexId)> = (0..n as VertexId).map(|v| (v, v)).collect();
        let ks = [1, 10, 50, 200];
        let r = random_guess_resolution(n, &mapping, &ks, 4).unwrap();
        for (&k, &h) in ks.iter().zip(&r.hit_rates) {
            let p = k as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((h - p).abs() <= 3.0 * se + 1e-12, "k={k} hit={h} p={p}");
        }
    }
}
