use nalgebra::DMatrix;

use super::kdtree::KdTree;
use super::{Graph, GraphError};
use crate::sparse;

/// Neighbour selection rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NnStrategy {
    /// Each point links to its `k` nearest neighbours.
    Knn(usize),
    /// Each point links to every point within the given distance.
    Radius(f64),
}

/// Width of the Gaussian kernel `exp(-d^2 / sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Sigma {
    /// Mean distance to the k-th neighbour (k-NN) or mean neighbour distance (radius).
    #[default]
    Auto,
    Fixed(f64),
}

/// Directed neighbour lists: `(i, j, distance)`.
pub(crate) fn neighbour_arcs(
    points: &DMatrix<f64>,
    strategy: NnStrategy,
) -> Result<Vec<(usize, usize, f64)>, GraphError> {
    let m = points.nrows();
    let tree = KdTree::new(points);
    let mut arcs = Vec::new();
    for i in 0..m {
        let q: Vec<f64> = points.row(i).iter().copied().collect();
        let found = match strategy {
            NnStrategy::Knn(k) => tree.knn(&q, k, Some(i)),
            NnStrategy::Radius(eps) => tree.within(&q, eps, Some(i)),
        };
        arcs.extend(found.into_iter().map(|(d2, j)| (i, j, d2.sqrt())));
    }
    Ok(arcs)
}

pub(crate) fn check_strategy(strategy: NnStrategy, m: usize) -> Result<(), GraphError> {
    match strategy {
        NnStrategy::Knn(0) => Err(GraphError::BadParameter("k must be positive".into())),
        NnStrategy::Knn(k) if k >= m => Err(GraphError::KTooLarge { k, points: m }),
        NnStrategy::Radius(eps) if !(eps > 0.0 && eps.is_finite()) => {
            Err(GraphError::BadParameter(format!("radius must be positive, got {eps}")))
        }
        _ => Ok(()),
    }
}

pub(crate) fn auto_sigma(arcs: &[(usize, usize, f64)], m: usize, strategy: NnStrategy) -> f64 {
    let values: Vec<f64> = match strategy {
        NnStrategy::Knn(k) => {
            // arcs of each point are contiguous and sorted by distance
            let mut kth = vec![0.0; m];
            let mut count = vec![0usize; m];
            for &(i, _, d) in arcs {
                count[i] += 1;
                if count[i] == k {
                    kth[i] = d;
                }
            }
            kth
        }
        NnStrategy::Radius(_) => arcs.iter().map(|a| a.2).collect(),
    };
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Gaussian-weighted arcs symmetrized by the entrywise maximum.
pub(crate) fn weighted_graph(
    arcs: &[(usize, usize, f64)],
    m: usize,
    sigma: f64,
    coords: Option<DMatrix<f64>>,
) -> Result<Graph, GraphError> {
    let mut triplets: Vec<(usize, usize, f64)> = arcs
        .iter()
        .flat_map(|&(i, j, d)| {
            let w = (-(d * d) / (sigma * sigma)).exp().max(f64::MIN_POSITIVE);
            [(i, j, w), (j, i, w)]
        })
        .collect();
    triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(b.2.total_cmp(&a.2)));
    triplets.dedup_by(|later, first| later.0 == first.0 && later.1 == first.1);
    Graph::builder(sparse::from_triplets(m, m, triplets))
        .directed(false)
        .maybe_coords(coords)
        .build()
}

pub(crate) fn coords_from_points(points: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, d) = points.shape();
    match d {
        0 => DMatrix::zeros(m, 2),
        1 => DMatrix::from_fn(m, 2, |i, c| if c == 0 { points[(i, 0)] } else { 0.0 }),
        2 => points.clone(),
        _ => points.columns(0, 3).into_owned(),
    }
}

/// Nearest-neighbour graph of the rows of `points` (an `M x D` matrix).
///
/// Weights are `exp(-d^2 / sigma^2)`; the neighbour relation is made symmetric
/// with `W <- max(W, W^T)`. Coordinates are the first two or three columns.
pub fn nn_graph(points: &DMatrix<f64>, strategy: NnStrategy, sigma: Sigma) -> Result<Graph, GraphError> {
    let m = points.nrows();
    if m < 2 {
        return Err(GraphError::SizeTooSmall(format!("need at least 2 points, got {m}")));
    }
    if points.iter().any(|v| !v.is_finite()) {
        return Err(GraphError::BadParameter("points must be finite".into()));
    }
    check_strategy(strategy, m)?;
    let first = points.row(0);
    if (1..m).all(|i| points.row(i) == first) {
        return Err(GraphError::DegenerateCloud);
    }
    let arcs = neighbour_arcs(points, strategy)?;
    let sigma = match sigma {
        Sigma::Fixed(s) if s > 0.0 && s.is_finite() => s,
        Sigma::Fixed(s) => return Err(GraphError::BadParameter(format!("sigma must be positive, got {s}"))),
        Sigma::Auto => {
            let s = auto_sigma(&arcs, m, strategy);
            if s > 0.0 {
                s
            } else {
                1.0
            }
        }
    };
    Ok(weighted_graph(&arcs, m, sigma, Some(coords_from_points(points)))?.with_name("nn"))
}
