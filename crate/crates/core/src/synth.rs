//! Seeded synthetic graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PantherError, Result};
use crate::graph::{GraphBuilder, VertexId, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SynthKind {
    ErdosRenyi { n: usize, p: f64 },
    PreferentialAttachment { n: usize, m: usize },
    /// A preferential-attachment graph plus a relabelled copy with a fraction `rho` of
    /// its edges rewired.
    TwoCopiesPerturbed { n: usize, m: usize, rho: f64 },
}

#[derive(Clone, Debug)]
pub struct Synthesized {
    pub graph: WeightedGraph,
    /// Second network and the ground-truth `(id in graph, id in copy)` pairs.
    pub copy: Option<(WeightedGraph, Vec<(VertexId, VertexId)>)>,
}

pub fn synth_graph(kind: SynthKind, seed: u64) -> Result<Synthesized> {
    match kind {
        SynthKind::ErdosRenyi { n, p } => {
            Ok(Synthesized { graph: erdos_renyi(n, p, seed)?, copy: None })
        }
        SynthKind::PreferentialAttachment { n, m } => {
            Ok(Synthesized { graph: preferential_attachment(n, m, seed)?, copy: None })
        }
        SynthKind::TwoCopiesPerturbed { n, m, rho } => {
            let base = preferential_attachment(n, m, seed)?;
            let (copy, mapping) = perturbed_copy(&base, rho, seed.wrapping_add(1))?;
            Ok(Synthesized { graph: base, copy: Some((copy, mapping)) })
        }
    }
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(PantherError::InvalidArgument(format!("edge probability {p} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in (u + 1)..n as VertexId {
            if rng.gen_bool(p) {
                edges.push((u, v, 1.0));
            }
        }
    }
    WeightedGraph::from_edges(n, &edges)
}

/// Starts from a clique on `m` vertices; each later vertex links to `m` distinct existing
/// vertices picked proportionally to degree. Edge count is `m(m-1)/2 + m(n-m)`.
pub fn preferential_attachment(n: usize, m: usize, seed: u64) -> Result<WeightedGraph> {
    if m == 0 || n <= m {
        return Err(PantherError::InvalidArgument(format!(
            "preferential attachment needs 1 <= m < n, got n={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * (m - 1) / 2 + m * (n - m));
    // every edge endpoint, so a uniform pick is a degree-proportional pick
    let mut endpoints: Vec<VertexId> = Vec::with_capacity(2 * edges.capacity());
    for u in 0..m as VertexId {
        for v in (u + 1)..m as VertexId {
            edges.push((u, v, 1.0));
            endpoints.extend([u, v]);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for v in m as VertexId..n as VertexId {
        chosen.clear();
        while chosen.len() < m {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t, v, 1.0));
            endpoints.extend([t, v]);
        }
    }
    WeightedGraph::from_edges(n, &edges)
}

/// Copies `base` under a random relabelling of ids (labels are kept), then moves
/// `round(rho * |E|)` randomly chosen edges to random vertex pairs that were not
/// adjacent. Returns the copy and the `(base id, copy id)` correspondence.
pub fn perturbed_copy(
    base: &WeightedGraph,
    rho: f64,
    seed: u64,
) -> Result<(WeightedGraph, Vec<(VertexId, VertexId)>)> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(PantherError::InvalidArgument(format!("rewire fraction {rho} not in [0, 1]")));
    }
    let n = base.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<VertexId> = (0..n as VertexId).collect();
    perm.shuffle(&mut rng);

    let mut edges: Vec<(VertexId, VertexId, f64)> = Vec::with_capacity(base.edge_count());
    for u in 0..n as VertexId {
        let (nbrs, ws) = base.neighbors_with_weights(u);
        for (&v, &w) in nbrs.iter().zip(ws) {
            if u <= v {
                let (a, b) = (perm[u as usize], perm[v as usize]);
                edges.push((a.min(b), a.max(b), w));
            }
        }
    }
    edges.sort_by_key(|&(a, b, _)| (a, b));

    let rewire = (rho * edges.len() as f64).round() as usize;
    if rewire > 0 {
        let max_edges = n * (n - 1) / 2;
        if edges.len() + rewire > max_edges {
            return Err(PantherError::InvalidArgument("not enough free vertex pairs to rewire into".into()));
        }
        let mut present: HashSet<(VertexId, VertexId)> =
            edges.iter().map(|&(a, b, _)| (a, b)).collect();
        let victims: Vec<usize> = rand::seq::index::sample(&mut rng, edges.len(), rewire).into_vec();
        for i in victims {
            // original pairs stay in `present`, so a moved edge never lands on one
            let (_, _, w) = edges[i];
            let (x, y) = loop {
                let x = rng.gen_range(0..n as VertexId);
                let y = rng.gen_range(0..n as VertexId);
                let key = (x.min(y), x.max(y));
                if x != y && !present.contains(&key) {
                    break key;
                }
            };
            present.insert((x, y));
            edges[i] = (x, y, w);
        }
    }

    let mut inverse = vec![0 as VertexId; n];
    for (orig, &new) in perm.iter().enumerate() {
        inverse[new as usize] = orig as VertexId;
    }
    let mut builder = GraphBuilder::new();
    for new in 0..n {
        builder.add_vertex(base.label(inverse[new]));
    }
    let mut copy_labels_edges = Vec::with_capacity(edges.len());
    for &(a, b, w) in &edges {
        copy_labels_edges.push((base.label(inverse[a as usize]), base.label(inverse[b as usize]), w));
    }
    for (a, b, w) in copy_labels_edges {
        builder.add_edge(a, b, w);
    }
    let copy = builder.build();
    let mapping = (0..n as VertexId).map(|v| (v, perm[v as usize])).collect();
    Ok((copy, mapping))
}
