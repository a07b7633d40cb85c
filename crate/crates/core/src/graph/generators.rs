//! Deterministic and seeded random graph families.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::RngExt;
use rand_distr::{Distribution, Normal};

use super::nn::{nn_graph, NnStrategy, Sigma};
use super::{Graph, GraphError};
use crate::rng::{self, streams};
use crate::sparse;

fn undirected(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
    coords: Option<DMatrix<f64>>,
    name: &str,
) -> Result<Graph, GraphError> {
    let triplets = edges.into_iter().flat_map(|(i, j)| [(i, j, 1.0), (j, i, 1.0)]);
    Graph::builder(sparse::from_triplets(n, n, triplets))
        .directed(false)
        .maybe_coords(coords)
        .name(name)
        .build()
}

/// Cycle on `n >= 3` vertices placed on the unit circle.
pub fn ring(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::SizeTooSmall(format!("ring needs n >= 3, got {n}")));
    }
    let coords = DMatrix::from_fn(n, 2, |i, c| {
        let t = 2.0 * PI * i as f64 / n as f64;
        if c == 0 {
            t.cos()
        } else {
            t.sin()
        }
    });
    undirected(n, (0..n).map(|i| (i, (i + 1) % n)), Some(coords), "ring")
}

/// Path on `n >= 2` vertices laid out on the x axis.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::SizeTooSmall(format!("path needs n >= 2, got {n}")));
    }
    let coords = DMatrix::from_fn(n, 2, |i, c| if c == 0 { i as f64 } else { 0.0 });
    undirected(n, (0..n - 1).map(|i| (i, i + 1)), Some(coords), "path")
}

/// Star with `degree` leaves around vertex 0, plus a tail of `tail` vertices.
///
/// Leaves fan out over the left half plane, the tail runs along the positive x axis.
pub fn comet(tail: usize, degree: usize) -> Result<Graph, GraphError> {
    if degree == 0 || tail + degree < 1 {
        return Err(GraphError::SizeTooSmall("comet needs a star degree >= 1".into()));
    }
    let n = 1 + degree + tail;
    let mut edges: Vec<(usize, usize)> = (1..=degree).map(|j| (0, j)).collect();
    let mut prev = 0;
    for t in 0..tail {
        let v = 1 + degree + t;
        edges.push((prev, v));
        prev = v;
    }
    let mut coords = DMatrix::zeros(n, 2);
    for j in 0..degree {
        let theta = PI / 2.0 + PI * (j as f64 + 0.5) / degree as f64;
        coords[(1 + j, 0)] = theta.cos();
        coords[(1 + j, 1)] = theta.sin();
    }
    for t in 0..tail {
        coords[(1 + degree + t, 0)] = (t + 1) as f64;
    }
    undirected(n, edges, Some(coords), "comet")
}

/// 4-neighbour lattice with `rows * cols` vertices, numbered row-major.
pub fn grid2d(rows: usize, cols: usize) -> Result<Graph, GraphError> {
    if rows == 0 || cols == 0 || rows * cols < 2 {
        return Err(GraphError::SizeTooSmall(format!("grid {rows}x{cols} has fewer than 2 vertices")));
    }
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
        }
    }
    let coords = DMatrix::from_fn(rows * cols, 2, |i, k| {
        if k == 0 {
            (i % cols) as f64
        } else {
            (rows - 1 - i / cols) as f64
        }
    });
    undirected(rows * cols, edges, Some(coords), "grid2d")
}

fn check_probability(p: f64) -> Result<(), GraphError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GraphError::BadProbability(p))
    }
}

/// G(n, p): each of the `n(n-1)/2` pairs is an edge with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    check_probability(p)?;
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let mut rng = rng::stream(seed, streams::EDGES);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    undirected(n, edges, None, "erdos_renyi")
}

/// Stochastic block model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub n: usize,
    pub block_sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
}

fn block_labels(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect()
}

fn sample_blocks(labels: &[usize], p_in: f64, p_out: f64, seed: u64) -> Vec<(usize, usize)> {
    let n = labels.len();
    let mut rng = rng::stream(seed, streams::EDGES);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if labels[i] == labels[j] { p_in } else { p_out };
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    edges
}

pub fn sbm(params: &SbmParams, seed: u64) -> Result<Graph, GraphError> {
    check_probability(params.p_in)?;
    check_probability(params.p_out)?;
    let total: usize = params.block_sizes.iter().sum();
    if total != params.n {
        return Err(GraphError::BlockSizeMismatch { expected: params.n, got: total });
    }
    if params.n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let labels = block_labels(&params.block_sizes);
    let edges = sample_blocks(&labels, params.p_in, params.p_out, seed);
    undirected(params.n, edges, None, "sbm")
}

/// Community graph: a block model with dense blocks and sparse links between them.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityParams {
    pub n: usize,
    /// Defaults to `round(sqrt(n) / 2)`, at least 1.
    pub communities: Option<usize>,
    pub p_in: f64,
    /// Defaults to `1 / n`.
    pub p_out: Option<f64>,
}

impl CommunityParams {
    pub fn new(n: usize) -> Self {
        CommunityParams { n, communities: None, p_in: 0.5, p_out: None }
    }
}

pub fn community(params: &CommunityParams, seed: u64) -> Result<Graph, GraphError> {
    let n = params.n;
    if n < 2 {
        return Err(GraphError::SizeTooSmall(format!("community needs n >= 2, got {n}")));
    }
    let c = params
        .communities
        .unwrap_or_else(|| (((n as f64).sqrt() / 2.0).round() as usize).max(1));
    if c == 0 || c > n {
        return Err(GraphError::BadParameter(format!("{c} communities for {n} vertices")));
    }
    let p_out = params.p_out.unwrap_or(1.0 / n as f64);
    check_probability(params.p_in)?;
    check_probability(p_out)?;
    let sizes: Vec<usize> = (0..c).map(|b| n / c + usize::from(b < n % c)).collect();
    let labels = block_labels(&sizes);
    let edges = sample_blocks(&labels, params.p_in, p_out, seed);

    // communities placed on a circle, members scattered around each centre
    let mut rng = rng::stream(seed, streams::POINTS);
    let spread = Normal::new(0.0, 0.15).expect("valid normal");
    let coords = DMatrix::from_fn(n, 2, |i, k| {
        let t = 2.0 * PI * labels[i] as f64 / c as f64;
        let centre = if k == 0 { t.cos() } else { t.sin() };
        centre + spread.sample(&mut rng)
    });
    undirected(n, edges, Some(coords), "community")
}

const SENSOR_ATTEMPTS: usize = 100;

/// Random geometric graph: `n` uniform points in the unit square joined to their
/// `k` nearest neighbours with Gaussian weights.
///
/// Point sets are redrawn (from the same seeded stream) until the graph is
/// connected.
pub fn sensor(n: usize, k: usize, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::SizeTooSmall(format!("sensor needs n >= 2, got {n}")));
    }
    let mut rng = rng::stream(seed, streams::POINTS);
    for _ in 0..SENSOR_ATTEMPTS {
        let points = DMatrix::from_fn(n, 2, |_, _| rng.random::<f64>());
        let g = nn_graph(&points, NnStrategy::Knn(k), Sigma::Auto)?;
        if g.is_connected() {
            return Ok(g.with_name("sensor"));
        }
    }
    Err(GraphError::GenerationFailed(SENSOR_ATTEMPTS))
}

/// Swiss roll point cloud in 3D, `k = 6` nearest-neighbour graph.
pub fn swiss_roll(n: usize, noise: f64, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::SizeTooSmall(format!("swiss roll needs n >= 2, got {n}")));
    }
    let mut rng = rng::stream(seed, streams::POINTS);
    let jitter = Normal::new(0.0, noise.max(0.0)).map_err(|e| GraphError::BadParameter(e.to_string()))?;
    let mut points = DMatrix::zeros(n, 3);
    let scale = 1.0 / (4.5 * PI);
    for i in 0..n {
        let t = 1.5 * PI * (1.0 + 2.0 * rng.random::<f64>());
        let h = 21.0 * rng.random::<f64>();
        points[(i, 0)] = t * t.cos() * scale + jitter.sample(&mut rng);
        points[(i, 1)] = h * scale + jitter.sample(&mut rng);
        points[(i, 2)] = t * t.sin() * scale + jitter.sample(&mut rng);
    }
    Ok(nn_graph(&points, NnStrategy::Knn(6.min(n - 1)), Sigma::Auto)?.with_name("swiss_roll"))
}

/// Two interleaved half circles of radius 1 with Gaussian noise 0.05, `k = 5` graph.
pub fn two_moons(n: usize, seed: u64) -> Result<Graph, GraphError> {
    two_moons_with(n, 1.0, 0.05, 5, seed)
}

pub fn two_moons_with(n: usize, radius: f64, noise: f64, k: usize, seed: u64) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::SizeTooSmall(format!("two moons needs n >= 2, got {n}")));
    }
    let mut rng = rng::stream(seed, streams::POINTS);
    let jitter = Normal::new(0.0, noise.max(0.0)).map_err(|e| GraphError::BadParameter(e.to_string()))?;
    let upper = n / 2;
    let mut points = DMatrix::zeros(n, 2);
    for i in 0..n {
        let theta = PI * rng.random::<f64>();
        let (x, y) = if i < upper {
            (radius * theta.cos(), radius * theta.sin())
        } else {
            (radius * (1.0 - theta.cos()), radius * (0.5 - theta.sin()))
        };
        points[(i, 0)] = x + jitter.sample(&mut rng);
        points[(i, 1)] = y + jitter.sample(&mut rng);
    }
    Ok(nn_graph(&points, NnStrategy::Knn(k.min(n - 1)), Sigma::Auto)?.with_name("two_moons"))
}
