//! Exact k-nearest-neighbor search over fixed-dimension points.
//!
//! The tree is implicit: points are permuted so that every subrange `[lo, hi)`
//! has its median at `(lo + hi) / 2`, split on coordinate `depth % dim`.
//! Everything left of the median is `<=` it on that coordinate and everything
//! right of it is `>=`. Small ranges are scanned linearly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::graph::VertexId;

const LEAF_SIZE: usize = 8;

/// Candidate ordered by squared distance, then id. Larger = worse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub id: VertexId,
    pub squared_distance: f64,
}

impl Eq for Neighbor {}

impl Ord for Neighbor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.squared_distance
            .total_cmp(&other.squared_distance)
            .then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Neighbor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Clone, Debug)]
pub struct KdTree {
    dim: usize,
    points: Vec<f64>,
    ids: Vec<VertexId>,
    order: Vec<u32>,
}

impl KdTree {
    /// `points` is row-major with `ids.len()` rows of `dim` coordinates.
    pub fn build(dim: usize, points: Vec<f64>, ids: Vec<VertexId>) -> Self {
        assert!(dim > 0, "dimension must be positive");
        assert_eq!(points.len(), dim * ids.len(), "point buffer does not match id count");
        let mut order: Vec<u32> = (0..ids.len() as u32).collect();
        let mut tree = KdTree { dim, points, ids, order: Vec::new() };
        tree.build_range(&mut order, 0);
        tree.order = order;
        tree
    }

    fn coord(&self, row: u32, d: usize) -> f64 {
        self.points[row as usize * self.dim + d]
    }

    fn row(&self, row: u32) -> &[f64] {
        &self.points[row as usize * self.dim..(row as usize + 1) * self.dim]
    }

    fn build_range(&self, slice: &mut [u32], depth: usize) {
        if slice.len() <= LEAF_SIZE {
            return;
        }
        let mid = slice.len() / 2;
        let d = depth % self.dim;
        slice.select_nth_unstable_by(mid, |&a, &b| self.coord(a, d).total_cmp(&self.coord(b, d)));
        let (left, rest) = slice.split_at_mut(mid);
        self.build_range(left, depth + 1);
        self.build_range(&mut rest[1..], depth + 1);
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The `k` points closest to `query`, nearest first, ties by ascending id.
    /// A point whose id equals `exclude` is never returned.
    pub fn nearest(&self, query: &[f64], k: usize, exclude: Option<VertexId>) -> Vec<Neighbor> {
        assert_eq!(query.len(), self.dim, "query dimension mismatch");
        if k == 0 || self.is_empty() {
            return Vec::new();
        }
        let mut best = BinaryHeap::with_capacity(k + 1);
        self.search(query, k, exclude, 0, self.order.len(), 0, &mut best);
        best.into_sorted_vec()
    }

    fn offer(
        &self,
        query: &[f64],
        row: u32,
        k: usize,
        exclude: Option<VertexId>,
        best: &mut BinaryHeap<Neighbor>,
    ) {
        let id = self.ids[row as usize];
        if Some(id) == exclude {
            return;
        }
        let cand = Neighbor { id, squared_distance: squared_distance(query, self.row(row)) };
        if best.len() < k {
            best.push(cand);
        } else if cand < *best.peek().unwrap() {
            best.pop();
            best.push(cand);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        query: &[f64],
        k: usize,
        exclude: Option<VertexId>,
        lo: usize,
        hi: usize,
        depth: usize,
        best: &mut BinaryHeap<Neighbor>,
    ) {
        if hi - lo <= LEAF_SIZE {
            for i in lo..hi {
                self.offer(query, self.order[i], k, exclude, best);
            }
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let pivot = self.order[mid];
        self.offer(query, pivot, k, exclude, best);

        let d = depth % self.dim;
        let diff = query[d] - self.coord(pivot, d);
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(query, k, exclude, near.0, near.1, depth + 1, best);
        // `<=` so equidistant points on the far side still compete on id
        if best.len() < k || diff * diff <= best.peek().unwrap().squared_distance {
            self.search(query, k, exclude, far.0, far.1, depth + 1, best);
        }
    }
}
