//! Exact nearest-neighbour search with a k-d tree.
//!
//! Results are ordered by `(squared distance, index)`, so equal distances are
//! resolved towards the smaller point index. This makes the output identical to
//! a brute-force scan sorted the same way.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DMatrix;

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist2: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { dim: usize, value: f64, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    data: Vec<f64>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    /// Index the rows of `points`.
    pub fn new(points: &DMatrix<f64>) -> Self {
        let (m, dim) = points.shape();
        let mut data = Vec::with_capacity(m * dim);
        for i in 0..m {
            data.extend(points.row(i).iter());
        }
        let mut tree = KdTree { dim, data, order: (0..m).collect(), nodes: Vec::new() };
        if m > 0 {
            tree.build(0, m);
        }
        tree
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE || self.dim == 0 {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        // split on the dimension of largest spread
        let mut best = (0, -1.0);
        for d in 0..self.dim {
            let (lo, hi) = self.order[start..end].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = self.data[i * self.dim + d];
                (lo.min(v), hi.max(v))
            });
            if hi - lo > best.1 {
                best = (d, hi - lo);
            }
        }
        let dim = best.0;
        if best.1 <= 0.0 {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let mid = start + (end - start) / 2;
        let data = &self.data;
        let stride = self.dim;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            data[a * stride + dim].total_cmp(&data[b * stride + dim])
        });
        let value = self.data[self.order[mid] * self.dim + dim];
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split { dim, value, left, right };
        id
    }

    fn dist2(&self, q: &[f64], i: usize) -> f64 {
        self.point(i).iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    /// The `k` nearest stored points to `query`, skipping index `exclude`.
    /// Returns `(squared distance, index)` pairs in ascending order.
    pub fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<(f64, usize)> {
        if k == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.knn_node(0, query, k, exclude, &mut heap);
        let mut out: Vec<Candidate> = heap.into_vec();
        out.sort();
        out.into_iter().map(|c| (c.dist2, c.index)).collect()
    }

    fn knn_node(
        &self,
        node: usize,
        q: &[f64],
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if Some(i) == exclude {
                        continue;
                    }
                    let c = Candidate { dist2: self.dist2(q, i), index: i };
                    if heap.len() < k {
                        heap.push(c);
                    } else if c < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(c);
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let diff = q[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.knn_node(near, q, k, exclude, heap);
                // `<=` keeps equal-distance candidates with smaller indices reachable
                if heap.len() < k || diff * diff <= heap.peek().expect("non-empty").dist2 {
                    self.knn_node(far, q, k, exclude, heap);
                }
            }
        }
    }

    /// All stored points within distance `radius` of `query` (inclusive),
    /// skipping `exclude`, in ascending `(squared distance, index)` order.
    pub fn within(&self, query: &[f64], radius: f64, exclude: Option<usize>) -> Vec<(f64, usize)> {
        let mut out = Vec::new();
        if !self.nodes.is_empty() {
            self.within_node(0, query, radius * radius, exclude, &mut out);
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }

    fn within_node(&self, node: usize, q: &[f64], r2: f64, exclude: Option<usize>, out: &mut Vec<(f64, usize)>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if Some(i) == exclude {
                        continue;
                    }
                    let d2 = self.dist2(q, i);
                    if d2 <= r2 {
                        out.push((d2, i));
                    }
                }
            }
            Node::Split { dim, value, left, right } => {
                let diff = q[dim] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.within_node(near, q, r2, exclude, out);
                if diff * diff <= r2 {
                    self.within_node(far, q, r2, exclude, out);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(points: &DMatrix<f64>, q: usize, k: usize) -> Vec<(f64, usize)> {
        let mut all: Vec<(f64, usize)> = (0..points.nrows())
            .filter(|&j| j != q)
            .map(|j| ((points.row(j) - points.row(q)).norm_squared(), j))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        all.truncate(k);
        all
    }

    #[test]
    fn ties_prefer_lower_index() {
        let pts = DMatrix::from_row_slice(3, 1, &[0.0, 1.0, 2.0]);
        let t = KdTree::new(&pts);
        assert_eq!(t.knn(&[1.0], 1, Some(1)), vec![(1.0, 0)]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(coords in proptest::collection::vec(-10i32..10, 2 * 40), k in 1usize..10) {
            // integer lattice points produce many exact ties
            let pts = DMatrix::from_row_iterator(40, 2, coords.iter().map(|&c| c as f64));
            let t = KdTree::new(&pts);
            for q in 0..40 {
                let query: Vec<f64> = pts.row(q).iter().copied().collect();
                let got = t.knn(&query, k, Some(q));
                let want = brute(&pts, q, k);
                prop_assert_eq!(got, want);
            }
        }
    }
}
