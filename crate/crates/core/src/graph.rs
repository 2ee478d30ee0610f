//! Undirected weighted network in compressed adjacency form.
//!
//! Vertices carry arbitrary string labels externally and dense `u32` ids
//! internally. Each vertex keeps the prefix sums of its incident edge
//! weights so that a weighted neighbor draw is a single binary search.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rand::Rng;

use crate::error::{PantherError, Result};

pub type VertexId = u32;

const SNAPSHOT_MAGIC: &[u8; 8] = b"PNTHGRPH";
const SNAPSHOT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    label_index: HashMap<String, VertexId>,
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    edge_count: usize,
    unit_weights: bool,
}

/// Accumulates labelled edges; duplicate undirected edges have their weights summed.
#[derive(Default, Debug)]
pub struct GraphBuilder {
    labels: Vec<String>,
    label_index: HashMap<String, VertexId>,
    edges: HashMap<(VertexId, VertexId), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: &str) -> VertexId {
        match self.label_index.entry(label.to_owned()) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let id = self.labels.len() as VertexId;
                self.labels.push(label.to_owned());
                e.insert(id);
                id
            }
        }
    }

    /// Adds (or reinforces) the undirected edge `a - b`. The caller guarantees `weight > 0`.
    pub fn add_edge(&mut self, a: &str, b: &str, weight: f64) {
        let u = self.add_vertex(a);
        let v = self.add_vertex(b);
        self.add_edge_ids(u, v, weight);
    }

    fn add_edge_ids(&mut self, u: VertexId, v: VertexId, weight: f64) {
        let key = if u <= v { (u, v) } else { (v, u) };
        *self.edges.entry(key).or_insert(0.0) += weight;
    }

    pub fn build(self) -> WeightedGraph {
        let n = self.labels.len();
        let mut adj: Vec<Vec<(VertexId, f64)>> = vec![Vec::new(); n];
        let edge_count = self.edges.len();
        for (&(u, v), &w) in &self.edges {
            adj[u as usize].push((v, w));
            if u != v {
                adj[v as usize].push((u, w));
            }
        }
        WeightedGraph::from_adjacency(self.labels, self.label_index, adj, edge_count)
    }
}

impl WeightedGraph {
    fn from_adjacency(
        labels: Vec<String>,
        label_index: HashMap<String, VertexId>,
        mut adj: Vec<Vec<(VertexId, f64)>>,
        edge_count: usize,
    ) -> Self {
        let nnz: usize = adj.iter().map(Vec::len).sum();
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        let mut neighbors = Vec::with_capacity(nnz);
        let mut weights = Vec::with_capacity(nnz);
        let mut cumulative = Vec::with_capacity(nnz);
        offsets.push(0);
        for list in adj.iter_mut() {
            list.sort_unstable_by_key(|&(v, _)| v);
            let mut acc = 0.0;
            for &(v, w) in list.iter() {
                acc += w;
                neighbors.push(v);
                weights.push(w);
                cumulative.push(acc);
            }
            offsets.push(neighbors.len());
        }
        let unit_weights = weights.iter().all(|&w| w == 1.0);
        WeightedGraph {
            labels,
            label_index,
            offsets,
            neighbors,
            weights,
            cumulative,
            edge_count,
            unit_weights,
        }
    }

    /// Builds a graph over vertices `0..vertex_count` labelled by their decimal id.
    pub fn from_edges(vertex_count: usize, edges: &[(VertexId, VertexId, f64)]) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for i in 0..vertex_count {
            b.add_vertex(&i.to_string());
        }
        for (i, &(u, v, w)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x as usize >= vertex_count {
                    return Err(PantherError::VertexOutOfRange {
                        id: x as usize,
                        vertex_count,
                    });
                }
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(PantherError::NonPositiveWeight { line: i + 1, weight: w });
            }
            b.add_edge_ids(u, v, w);
        }
        Ok(b.build())
    }

    /// Parses a whitespace-separated edge list.
    ///
    /// Lines are `u v` (unweighted) or `u v w` (weighted); `#` starts a comment line and a
    /// line holding a single label declares a vertex without edges. In unweighted mode every
    /// edge has weight 1.0 and a third field is rejected.
    pub fn load_edge_list<R: BufRead>(source: R, weighted: bool) -> Result<Self> {
        let mut b = GraphBuilder::new();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match (fields.as_slice(), weighted) {
                ([label], _) => {
                    b.add_vertex(label);
                }
                ([u, v], _) => b.add_edge(u, v, 1.0),
                ([u, v, w], true) => {
                    let weight: f64 = w.parse().map_err(|_| PantherError::Parse {
                        line: lineno,
                        message: format!("weight {w:?} is not a number"),
                    })?;
                    if !(weight > 0.0) || !weight.is_finite() {
                        return Err(PantherError::NonPositiveWeight { line: lineno, weight });
                    }
                    b.add_edge(u, v, weight);
                }
                _ => {
                    return Err(PantherError::Parse {
                        line: lineno,
                        message: format!(
                            "expected {} fields, found {}",
                            if weighted { "2 or 3" } else { "2" },
                            fields.len()
                        ),
                    })
                }
            }
        }
        Ok(b.build())
    }

    /// Writes the graph back out as an edge list, one undirected edge per line.
    ///
    /// Weights are omitted when every edge has unit weight. Vertices without any edge are
    /// emitted as single-label lines so that loading the output reproduces the graph.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for u in 0..self.vertex_count() as VertexId {
            let (nbrs, ws) = self.neighbors_with_weights(u);
            if nbrs.is_empty() {
                writeln!(out, "{}", self.labels[u as usize])?;
                continue;
            }
            for (&v, &w) in nbrs.iter().zip(ws) {
                if v < u {
                    continue;
                }
                if self.unit_weights {
                    writeln!(out, "{} {}", self.labels[u as usize], self.labels[v as usize])?;
                } else {
                    writeln!(out, "{} {} {}", self.labels[u as usize], self.labels[v as usize], w)?;
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Undirected edges counted once; a self-loop counts as one edge.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_unit_weights(&self) -> bool {
        self.unit_weights
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<VertexId> {
        self.label_index.get(label).copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn neighbors_with_weights(&self, v: VertexId) -> (&[VertexId], &[f64]) {
        let range = self.offsets[v as usize]..self.offsets[v as usize + 1];
        (&self.neighbors[range.clone()], &self.weights[range])
    }

    /// Prefix sums of the incident weights of `v`, aligned with [`Self::neighbors`].
    pub fn cumulative_weights(&self, v: VertexId) -> &[f64] {
        &self.cumulative[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let (nbrs, ws) = self.neighbors_with_weights(u);
        nbrs.binary_search(&v).ok().map(|i| ws[i])
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(PantherError::VertexOutOfRange {
                id: v as usize,
                vertex_count: self.vertex_count(),
            })
        }
    }

    /// Transition probabilities `w_vj / sum_k w_vk` out of `v`; empty for an isolated vertex.
    pub fn transition_distribution(&self, v: VertexId) -> Result<Vec<(VertexId, f64)>> {
        self.check_vertex(v)?;
        let (nbrs, ws) = self.neighbors_with_weights(v);
        if self.unit_weights {
            let p = 1.0 / nbrs.len() as f64;
            return Ok(nbrs.iter().map(|&j| (j, p)).collect());
        }
        let total = self.cumulative_weights(v).last().copied().unwrap_or(0.0);
        Ok(nbrs.iter().zip(ws).map(|(&j, &w)| (j, w / total)).collect())
    }

    /// Draws a neighbor of `v` with probability proportional to the edge weight.
    /// `Ok(None)` means `v` has no neighbors.
    pub fn transition_sample<R: Rng + ?Sized>(
        &self,
        v: VertexId,
        rng: &mut R,
    ) -> Result<Option<VertexId>> {
        self.check_vertex(v)?;
        Ok(self.step(v, rng))
    }

    #[inline]
    pub(crate) fn step<R: Rng + ?Sized>(&self, v: VertexId, rng: &mut R) -> Option<VertexId> {
        let start = self.offsets[v as usize];
        let end = self.offsets[v as usize + 1];
        let degree = end - start;
        if degree == 0 {
            return None;
        }
        if self.unit_weights {
            return Some(self.neighbors[start + rng.gen_range(0..degree)]);
        }
        let cum = &self.cumulative[start..end];
        let x = rng.gen::<f64>() * cum[degree - 1];
        let i = cum.partition_point(|&c| c <= x).min(degree - 1);
        Some(self.neighbors[start + i])
    }

    /// Writes the binary snapshot (layout documented in the README).
    pub fn write_snapshot<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(SNAPSHOT_MAGIC)?;
        out.write_u32::<LittleEndian>(SNAPSHOT_VERSION)?;
        out.write_u64::<LittleEndian>(self.vertex_count() as u64)?;
        out.write_u64::<LittleEndian>(self.edge_count as u64)?;
        out.write_u64::<LittleEndian>(self.neighbors.len() as u64)?;
        for label in &self.labels {
            out.write_u32::<LittleEndian>(label.len() as u32)?;
            out.write_all(label.as_bytes())?;
        }
        for &o in &self.offsets {
            out.write_u64::<LittleEndian>(o as u64)?;
        }
        for &v in &self.neighbors {
            out.write_u32::<LittleEndian>(v)?;
        }
        for &w in &self.weights {
            out.write_f64::<LittleEndian>(w)?;
        }
        Ok(())
    }

    pub fn read_snapshot<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err(PantherError::Format("not a graph snapshot".into()));
        }
        let version = input.read_u32::<LittleEndian>()?;
        if version != SNAPSHOT_VERSION {
            return Err(PantherError::Format(format!("unsupported graph snapshot version {version}")));
        }
        let n = input.read_u64::<LittleEndian>()? as usize;
        let edge_count = input.read_u64::<LittleEndian>()? as usize;
        let nnz = input.read_u64::<LittleEndian>()? as usize;
        let mut labels = Vec::with_capacity(n);
        let mut label_index = HashMap::with_capacity(n);
        for id in 0..n {
            let len = input.read_u32::<LittleEndian>()? as usize;
            let mut buf = vec![0u8; len];
            input.read_exact(&mut buf)?;
            let label = String::from_utf8(buf)
                .map_err(|_| PantherError::Format("label is not valid UTF-8".into()))?;
            label_index.insert(label.clone(), id as VertexId);
            labels.push(label);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            offsets.push(input.read_u64::<LittleEndian>()? as usize);
        }
        if offsets.first() != Some(&0)
            || offsets.last() != Some(&nnz)
            || offsets.windows(2).any(|w| w[0] > w[1])
        {
            return Err(PantherError::Format("corrupt adjacency offsets".into()));
        }
        let mut adj: Vec<Vec<(VertexId, f64)>> = Vec::with_capacity(n);
        let mut neighbors = vec![0u32; nnz];
        input.read_u32_into::<LittleEndian>(&mut neighbors)?;
        let mut weights = vec![0f64; nnz];
        input.read_f64_into::<LittleEndian>(&mut weights)?;
        for v in 0..n {
            let range = offsets[v]..offsets[v + 1];
            let mut list = Vec::with_capacity(range.len());
            for i in range {
                if neighbors[i] as usize >= n || !(weights[i] > 0.0) {
                    return Err(PantherError::Format("corrupt adjacency entry".into()));
                }
                list.push((neighbors[i], weights[i]));
            }
            adj.push(list);
        }
        Ok(Self::from_adjacency(labels, label_index, adj, edge_count))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn load(text: &str, weighted: bool) -> Result<WeightedGraph> {
        WeightedGraph::load_edge_list(text.as_bytes(), weighted)
    }

    #[test]
    fn unweighted_defaults_to_unit_weights() {
        let g = load("a b\nb c\n", false).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.weights.iter().all(|&w| w == 1.0));
        assert!(g.has_unit_weights());
    }

    #[test]
    fn duplicate_edges_sum() {
        let g = load("a b 1\na b 2\n", true).unwrap();
        assert_eq!(g.edge_count(), 1);
        let (a, b) = (g.id_of("a").unwrap(), g.id_of("b").unwrap());
        assert_eq!(g.edge_weight(a, b), Some(3.0));
        assert_eq!(g.edge_weight(b, a), Some(3.0));
    }

    #[test]
    fn reversed_duplicate_is_the_same_edge() {
        let g = load("a b 1\nb a 0.5\n", true).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge_weight(0, 1), Some(1.5));
    }

    #[test]
    fn empty_stream() {
        let g = load("", false).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let g = load("# header\n\na b\n  # indented comment\n", false).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn malformed_lines_report_line_number() {
        match load("a b\na b c d\n", true) {
            Err(PantherError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match load("a b\nb c x\n", true) {
            Err(PantherError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        // weight field in unweighted mode
        assert!(matches!(load("a b 2\n", false), Err(PantherError::Parse { line: 1, .. })));
    }

    #[test]
    fn non_positive_weight_rejected() {
        assert!(matches!(
            load("a b 0\n", true),
            Err(PantherError::NonPositiveWeight { line: 1, .. })
        ));
        assert!(matches!(
            load("x y 1\na b -2\n", true),
            Err(PantherError::NonPositiveWeight { line: 2, .. })
        ));
    }

    #[test]
    fn self_loop_kept() {
        let g = load("a a\na b\n", false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 0));
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn cumulative_weights_strictly_increase() {
        let g = load("a b 1\na c 3\na d 0.5\nb c 2\n", true).unwrap();
        for v in 0..g.vertex_count() as VertexId {
            let cum = g.cumulative_weights(v);
            assert!(cum.windows(2).all(|w| w[0] < w[1]));
            let (_, ws) = g.neighbors_with_weights(v);
            let total: f64 = ws.iter().sum();
            assert!((cum.last().unwrap() - total).abs() < 1e-12);
        }
    }

    #[test]
    fn transition_distribution_normalises() {
        let g = load("a b 1\na c 3\na d 0.7\nb c 2\nd e 11\n", true).unwrap();
        for v in 0..g.vertex_count() as VertexId {
            let s: f64 = g.transition_distribution(v).unwrap().iter().map(|p| p.1).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let u = load("a b\na c\na d\n", false).unwrap();
        for (_, p) in u.transition_distribution(0).unwrap() {
            assert_eq!(p, 1.0 / 3.0);
        }
    }

    #[test]
    fn weighted_pair_probabilities() {
        let g = load("a b 1\na c 3\n", true).unwrap();
        let dist = g.transition_distribution(0).unwrap();
        assert_eq!(dist, vec![(1, 0.25), (2, 0.75)]);
    }

    #[test]
    fn isolated_vertex_has_no_neighbor() {
        let g = load("solo\na b\n", false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(g.transition_sample(0, &mut rng).unwrap(), None);
    }

    #[test]
    fn out_of_range_vertex() {
        let g = load("a b\n", false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            g.transition_sample(7, &mut rng),
            Err(PantherError::VertexOutOfRange { id: 7, vertex_count: 2 })
        ));
    }

    #[test]
    fn snapshot_roundtrip() {
        let g = load("a b 1.5\nb c 2\nc c 0.25\nz\n", true).unwrap();
        let mut buf = Vec::new();
        g.write_snapshot(&mut buf).unwrap();
        let back = WeightedGraph::read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(g, back);
        buf[0] = b'X';
        assert!(matches!(
            WeightedGraph::read_snapshot(buf.as_slice()),
            Err(PantherError::Format(_))
        ));
    }
}
