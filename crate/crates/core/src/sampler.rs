//! Random path generation and the vertex-to-path inverted index.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{PantherError, Result};
use crate::graph::{VertexId, WeightedGraph};

/// Paths per RNG block. Block `b` draws from a generator seeded with `seed ^ b`, so the
/// output does not depend on how blocks are spread over threads.
pub const BLOCK_SIZE: usize = 4096;

const PATHS_MAGIC: &[u8; 8] = b"PNTHPATH";
const PATHS_VERSION: u32 = 1;

pub const DEFAULT_C: f64 = 0.5;
pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_PATH_LENGTH: usize = 5;

/// Error bound, confidence and path length that determine how many paths to draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
    pub path_length: usize,
}

impl SamplingBudget {
    pub fn new(epsilon: f64, delta: f64, c: f64, path_length: usize) -> Result<Self> {
        let b = SamplingBudget { epsilon, delta, c, path_length };
        b.validate()?;
        Ok(b)
    }

    /// `c = 0.5`, `delta = 0.1`, `T = 5` and `epsilon = sqrt(1/|E|)`.
    pub fn default_for_edges(edge_count: usize) -> Result<Self> {
        if edge_count == 0 {
            return Err(PantherError::InvalidBudget(
                "default epsilon needs at least one edge".into(),
            ));
        }
        Self::new(
            default_epsilon(edge_count),
            DEFAULT_DELTA,
            DEFAULT_C,
            DEFAULT_PATH_LENGTH,
        )
    }

    fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if !in_unit(self.epsilon) {
            return Err(PantherError::InvalidBudget(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !in_unit(self.delta) {
            return Err(PantherError::InvalidBudget(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(PantherError::InvalidBudget(format!("c must be positive, got {}", self.c)));
        }
        if self.path_length < 2 {
            return Err(PantherError::InvalidBudget(format!(
                "path length must be at least 2, got {}",
                self.path_length
            )));
        }
        Ok(())
    }
}

pub fn default_epsilon(edge_count: usize) -> f64 {
    (1.0 / edge_count as f64).sqrt()
}

/// Number of paths that make the sampled similarity an epsilon-approximation with
/// probability at least `1 - delta`:
/// `ceil(c / eps^2 * (log2(T choose 2) + 1 + ln(1/delta)))`.
pub fn required_sample_size(budget: &SamplingBudget) -> Result<usize> {
    budget.validate()?;
    let t = budget.path_length as f64;
    let vc_bound = (t * (t - 1.0) / 2.0).log2() + 1.0;
    let r = budget.c / (budget.epsilon * budget.epsilon) * (vc_bound + (1.0 / budget.delta).ln());
    Ok(r.ceil() as usize)
}

/// `R` sampled paths plus, for every vertex, the sorted ids of the paths that visit it.
#[derive(Clone, Debug, PartialEq)]
pub struct PathIndex {
    sample_size: usize,
    path_length: usize,
    seed: u64,
    vertex_count: usize,
    graph_fingerprint: u64,
    path_offsets: Vec<u64>,
    path_vertices: Vec<VertexId>,
    inverted_offsets: Vec<u64>,
    inverted_paths: Vec<u32>,
}

impl PathIndex {
    /// Wraps externally produced paths. The fingerprint is left at zero, so the index
    /// will not claim to match any graph.
    pub fn from_paths(
        vertex_count: usize,
        path_length: usize,
        seed: u64,
        paths: &[Vec<VertexId>],
    ) -> Result<Self> {
        if paths.is_empty() {
            return Err(PantherError::InvalidArgument("need at least one path".into()));
        }
        let mut path_offsets = Vec::with_capacity(paths.len() + 1);
        let mut path_vertices = Vec::new();
        path_offsets.push(0);
        for p in paths {
            if p.is_empty() || p.len() > path_length + 1 {
                return Err(PantherError::InvalidArgument(format!(
                    "path of {} vertices does not fit path length {path_length}",
                    p.len()
                )));
            }
            if let Some(&v) = p.iter().find(|&&v| v as usize >= vertex_count) {
                return Err(PantherError::VertexOutOfRange { id: v as usize, vertex_count });
            }
            path_vertices.extend_from_slice(p);
            path_offsets.push(path_vertices.len() as u64);
        }
        let (inverted_offsets, inverted_paths) =
            invert(vertex_count, &path_offsets, &path_vertices);
        Ok(PathIndex {
            sample_size: paths.len(),
            path_length,
            seed,
            vertex_count,
            graph_fingerprint: 0,
            path_offsets,
            path_vertices,
            inverted_offsets,
            inverted_paths,
        })
    }

    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    pub fn path_length(&self) -> usize {
        self.path_length
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn graph_fingerprint(&self) -> u64 {
        self.graph_fingerprint
    }

    pub fn path(&self, id: usize) -> &[VertexId] {
        &self.path_vertices[self.path_offsets[id] as usize..self.path_offsets[id + 1] as usize]
    }

    pub fn paths(&self) -> impl ExactSizeIterator<Item = &[VertexId]> + '_ {
        (0..self.sample_size).map(move |i| self.path(i))
    }

    /// Ids of the paths containing `v`, ascending and without duplicates.
    pub fn paths_through(&self, v: VertexId) -> &[u32] {
        let v = v as usize;
        &self.inverted_paths
            [self.inverted_offsets[v] as usize..self.inverted_offsets[v + 1] as usize]
    }

    /// Total number of (vertex, path) incidences in the inverted index.
    pub fn incidence_count(&self) -> usize {
        self.inverted_paths.len()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.vertex_count {
            Ok(())
        } else {
            Err(PantherError::VertexOutOfRange {
                id: v as usize,
                vertex_count: self.vertex_count,
            })
        }
    }

    /// Checks that this index was sampled from `g` (same labels and edge count).
    pub fn matches_graph(&self, g: &WeightedGraph) -> bool {
        self.vertex_count == g.vertex_count() && self.graph_fingerprint == graph_fingerprint(g)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(PATHS_MAGIC)?;
        out.write_u32::<LittleEndian>(PATHS_VERSION)?;
        out.write_u64::<LittleEndian>(self.sample_size as u64)?;
        out.write_u64::<LittleEndian>(self.path_length as u64)?;
        out.write_u64::<LittleEndian>(self.seed)?;
        out.write_u64::<LittleEndian>(self.vertex_count as u64)?;
        out.write_u64::<LittleEndian>(self.graph_fingerprint)?;
        for &o in &self.path_offsets {
            out.write_u64::<LittleEndian>(o)?;
        }
        for &v in &self.path_vertices {
            out.write_u32::<LittleEndian>(v)?;
        }
        for &o in &self.inverted_offsets {
            out.write_u64::<LittleEndian>(o)?;
        }
        for &p in &self.inverted_paths {
            out.write_u32::<LittleEndian>(p)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != PATHS_MAGIC {
            return Err(PantherError::Format("not a path index file".into()));
        }
        let version = input.read_u32::<LittleEndian>()?;
        if version != PATHS_VERSION {
            return Err(PantherError::Format(format!("unsupported path index version {version}")));
        }
        let sample_size = input.read_u64::<LittleEndian>()? as usize;
        let path_length = input.read_u64::<LittleEndian>()? as usize;
        let seed = input.read_u64::<LittleEndian>()?;
        let vertex_count = input.read_u64::<LittleEndian>()? as usize;
        let graph_fingerprint = input.read_u64::<LittleEndian>()?;

        let mut path_offsets = vec![0u64; sample_size + 1];
        input.read_u64_into::<LittleEndian>(&mut path_offsets)?;
        check_offsets(&path_offsets, "path")?;
        let mut path_vertices = vec![0u32; *path_offsets.last().unwrap() as usize];
        input.read_u32_into::<LittleEndian>(&mut path_vertices)?;
        if path_vertices.iter().any(|&v| v as usize >= vertex_count) {
            return Err(PantherError::Format("path vertex out of range".into()));
        }

        let mut inverted_offsets = vec![0u64; vertex_count + 1];
        input.read_u64_into::<LittleEndian>(&mut inverted_offsets)?;
        check_offsets(&inverted_offsets, "inverted index")?;
        let mut inverted_paths = vec![0u32; *inverted_offsets.last().unwrap() as usize];
        input.read_u32_into::<LittleEndian>(&mut inverted_paths)?;
        if inverted_paths.iter().any(|&p| p as usize >= sample_size) {
            return Err(PantherError::Format("inverted index path id out of range".into()));
        }

        Ok(PathIndex {
            sample_size,
            path_length,
            seed,
            vertex_count,
            graph_fingerprint,
            path_offsets,
            path_vertices,
            inverted_offsets,
            inverted_paths,
        })
    }
}

fn check_offsets(offsets: &[u64], what: &str) -> Result<()> {
    if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(PantherError::Format(format!("corrupt {what} offsets")));
    }
    Ok(())
}

/// FNV-1a over the edge count and the vertex labels in id order.
pub fn graph_fingerprint(g: &WeightedGraph) -> u64 {
    const PRIME: u64 = 0x100_0000_01b3;
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    eat(&(g.edge_count() as u64).to_le_bytes());
    for label in g.labels() {
        eat(&(label.len() as u64).to_le_bytes());
        eat(label.as_bytes());
    }
    h
}

/// Appends one walk to `out`: a uniformly random start followed by up to `path_length`
/// weighted steps. The walk stops early at a vertex without neighbors.
fn walk<R: Rng>(g: &WeightedGraph, path_length: usize, rng: &mut R, out: &mut Vec<VertexId>) {
    let mut v = rng.gen_range(0..g.vertex_count()) as VertexId;
    out.push(v);
    for _ in 0..path_length {
        match g.step(v, rng) {
            Some(next) => {
                out.push(next);
                v = next;
            }
            None => break,
        }
    }
}

/// Draws `sample_size` random paths of `path_length` steps and builds the inverted index.
/// The result is a pure function of `(g, sample_size, path_length, seed)`.
pub fn generate_paths(
    g: &WeightedGraph,
    sample_size: usize,
    path_length: usize,
    seed: u64,
) -> Result<PathIndex> {
    if sample_size == 0 || path_length == 0 {
        return Err(PantherError::InvalidArgument(
            "sample size and path length must both be positive".into(),
        ));
    }
    if g.vertex_count() == 0 {
        return Err(PantherError::InvalidArgument("cannot sample paths on an empty graph".into()));
    }
    if sample_size > u32::MAX as usize {
        return Err(PantherError::InvalidArgument(format!(
            "sample size {sample_size} exceeds the 32-bit path id space"
        )));
    }

    let blocks = sample_size.div_ceil(BLOCK_SIZE);
    let chunks: Vec<(Vec<VertexId>, Vec<u32>)> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK_SIZE.min(sample_size - b * BLOCK_SIZE);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ b as u64);
            let mut vertices = Vec::with_capacity(count * (path_length + 1));
            let mut lengths = Vec::with_capacity(count);
            for _ in 0..count {
                let before = vertices.len();
                walk(g, path_length, &mut rng, &mut vertices);
                lengths.push((vertices.len() - before) as u32);
            }
            (vertices, lengths)
        })
        .collect();

    let mut path_offsets = Vec::with_capacity(sample_size + 1);
    let mut path_vertices = Vec::with_capacity(sample_size * (path_length + 1));
    path_offsets.push(0u64);
    for (vertices, lengths) in chunks {
        for len in lengths {
            let last = *path_offsets.last().unwrap();
            path_offsets.push(last + len as u64);
        }
        path_vertices.extend_from_slice(&vertices);
    }

    let (inverted_offsets, inverted_paths) =
        invert(g.vertex_count(), &path_offsets, &path_vertices);

    Ok(PathIndex {
        sample_size,
        path_length,
        seed,
        vertex_count: g.vertex_count(),
        graph_fingerprint: graph_fingerprint(g),
        path_offsets,
        path_vertices,
        inverted_offsets,
        inverted_paths,
    })
}

/// Transposes the paths into per-vertex posting lists, counting each path once per vertex.
fn invert(n: usize, path_offsets: &[u64], path_vertices: &[VertexId]) -> (Vec<u64>, Vec<u32>) {
    let paths = path_offsets.len() - 1;
    let slice = |p: usize| &path_vertices[path_offsets[p] as usize..path_offsets[p + 1] as usize];

    let mut last_seen = vec![u32::MAX; n];
    let mut counts = vec![0u64; n + 1];
    for p in 0..paths {
        for &v in slice(p) {
            if last_seen[v as usize] != p as u32 {
                last_seen[v as usize] = p as u32;
                counts[v as usize + 1] += 1;
            }
        }
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    let offsets = counts;
    let mut cursor: Vec<u64> = offsets[..n].to_vec();
    let mut ids = vec![0u32; offsets[n] as usize];
    last_seen.fill(u32::MAX);
    for p in 0..paths {
        for &v in slice(p) {
            if last_seen[v as usize] != p as u32 {
                last_seen[v as usize] = p as u32;
                ids[cursor[v as usize] as usize] = p as u32;
                cursor[v as usize] += 1;
            }
        }
    }
    (offsets, ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    #[test]
    fn sample_size_reference_values() {
        // 50 * (log2(10) + 1 + ln 10) = 331.2257, 50 * (1 + ln 10) = 165.1293
        let b = SamplingBudget::new(0.1, 0.1, 0.5, 5).unwrap();
        assert_eq!(required_sample_size(&b).unwrap(), 332);
        let b = SamplingBudget::new(0.1, 0.1, 0.5, 2).unwrap();
        assert_eq!(required_sample_size(&b).unwrap(), 166);
    }

    #[test]
    fn sample_size_rejects_short_paths() {
        assert!(matches!(
            SamplingBudget::new(0.1, 0.1, 0.5, 1),
            Err(PantherError::InvalidBudget(_))
        ));
        let raw = SamplingBudget { epsilon: 0.1, delta: 0.1, c: 0.5, path_length: 1 };
        assert!(required_sample_size(&raw).is_err());
        for (e, d) in [(0.0, 0.1), (1.0, 0.1), (0.1, 0.0), (0.1, 1.5)] {
            assert!(SamplingBudget::new(e, d, 0.5, 5).is_err());
        }
    }

    #[test]
    fn default_budget() {
        let b = SamplingBudget::default_for_edges(400).unwrap();
        assert_eq!(b.epsilon, 0.05);
        assert_eq!((b.c, b.delta, b.path_length), (0.5, 0.1, 5));
        assert!(SamplingBudget::default_for_edges(0).is_err());
    }

    #[test]
    fn triangle_paths_are_walks() {
        let g = triangle();
        let idx = generate_paths(&g, 12_000, 2, 99).unwrap();
        assert_eq!(idx.paths().len(), 12_000);
        for p in idx.paths() {
            assert_eq!(p.len(), 3);
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
        }
    }

    #[test]
    fn isolated_vertex_truncates() {
        let g = WeightedGraph::from_edges(1, &[]).unwrap();
        let idx = generate_paths(&g, 5, 3, 0).unwrap();
        assert!(idx.paths().all(|p| p == [0]));
        assert_eq!(idx.paths_through(0), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn self_loop_counted_once_per_path() {
        // only edge is a loop, so every path is 0,0,0,0
        let g = WeightedGraph::from_edges(1, &[(0, 0, 1.0)]).unwrap();
        let idx = generate_paths(&g, 10, 3, 4).unwrap();
        assert!(idx.paths().all(|p| p == [0, 0, 0, 0]));
        assert_eq!(idx.paths_through(0).len(), 10);
    }

    #[test]
    fn invalid_arguments() {
        let g = triangle();
        assert!(matches!(generate_paths(&g, 0, 2, 0), Err(PantherError::InvalidArgument(_))));
        assert!(matches!(generate_paths(&g, 3, 0, 0), Err(PantherError::InvalidArgument(_))));
        let empty = WeightedGraph::from_edges(0, &[]).unwrap();
        assert!(generate_paths(&empty, 3, 2, 0).is_err());
    }

    #[test]
    fn deterministic_and_serializable() {
        let g = WeightedGraph::from_edges(
            5,
            &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 4, 1.0), (4, 0, 3.0)],
        )
        .unwrap();
        let a = generate_paths(&g, 10_000, 4, 42).unwrap();
        let b = generate_paths(&g, 10_000, 4, 42).unwrap();
        let (mut ba, mut bb) = (Vec::new(), Vec::new());
        a.write_to(&mut ba).unwrap();
        b.write_to(&mut bb).unwrap();
        assert_eq!(ba, bb);
        let back = PathIndex::read_from(ba.as_slice()).unwrap();
        assert_eq!(back, a);
        assert!(back.matches_graph(&g));
        assert_ne!(generate_paths(&g, 10_000, 4, 43).unwrap(), a);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let g = triangle();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| generate_paths(&g, 3 * BLOCK_SIZE + 17, 3, 5).unwrap());
        let b = four.install(|| generate_paths(&g, 3 * BLOCK_SIZE + 17, 3, 5).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn truncated_file_rejected() {
        let idx = generate_paths(&triangle(), 100, 2, 1).unwrap();
        let mut buf = Vec::new();
        idx.write_to(&mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(PathIndex::read_from(buf.as_slice()).is_err());
    }
}
